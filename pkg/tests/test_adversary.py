import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bqsdc.adversary import (AttackConfig, CheckTemplate, apply_attack,
                             claimed_detection_rate, eavesdrop_unitary,
                             estimate_detection, exact_detection_probability)
from bqsdc.codebook import ghz_state
from bqsdc.labels import GhzLabel
from bqsdc.particles import System
from bqsdc.protocol import SessionConfig, run_session
from bqsdc.qcore import Rng


class TestAttackConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            AttackConfig("swap_out")
        with pytest.raises(ValueError):
            AttackConfig("intercept_resend", target="S_D")
        with pytest.raises(ValueError):
            AttackConfig("intercept_resend", fake_state="2")
        with pytest.raises(ValueError):
            AttackConfig("measure_resend", eve_basis="Y")
        with pytest.raises(ValueError):
            AttackConfig("entangle_measure", alpha=1.0, beta=1.0)

    def test_entangling_constructor(self):
        cfg = AttackConfig.entangling(0.25)
        assert cfg.beta ** 2 == pytest.approx(0.25)
        assert cfg.alpha ** 2 + cfg.beta ** 2 == pytest.approx(1.0)


class TestEavesdropUnitary:
    @given(st.floats(0.0, 1.0))
    @settings(max_examples=60, deadline=None)
    def test_unitary_for_all_beta(self, beta_sq):
        alpha = np.sqrt(1.0 - beta_sq)
        beta = np.sqrt(beta_sq)
        e = eavesdrop_unitary(alpha, beta)
        assert np.allclose(e.conj().T @ e, np.eye(4), atol=1e-9)

    def test_flip_amplitude(self):
        e = eavesdrop_unitary(np.sqrt(0.75), np.sqrt(0.25))
        out = e @ np.array([1, 0, 0, 0], complex)  # |0>|0>
        assert abs(out[0]) ** 2 == pytest.approx(0.75)  # stays |0>, ancilla 0
        assert abs(out[3]) ** 2 == pytest.approx(0.25)  # flips, ancilla 1

    def test_identity_at_beta_zero(self):
        assert np.allclose(eavesdrop_unitary(1.0, 0.0), np.eye(4))


class TestAttackApplication:
    def test_intercept_returns_fresh_particle(self):
        sys = System(ghz_state(GhzLabel.PSI0))
        genuine = sys.particle(2)
        fake = apply_attack(genuine, AttackConfig("intercept_resend", fake_state="0"), Rng(1))
        assert fake.system is not sys
        assert fake.system.state.num_qubits == 1
        assert sys.state.num_qubits == 3  # genuine particle still entangled

    def test_measure_resend_collapses(self):
        sys = System(ghz_state(GhzLabel.PSI0))
        p = apply_attack(sys.particle(2), AttackConfig("measure_resend", eve_basis="Z"), Rng(1))
        assert p.system is sys
        # the whole triple collapsed to a definite computational state
        probs = np.abs(sys.state.amps) ** 2
        assert max(probs) == pytest.approx(1.0)

    def test_entangle_appends_ancilla(self):
        sys = System(ghz_state(GhzLabel.PSI0))
        p = apply_attack(sys.particle(2), AttackConfig.entangling(0.25), Rng(1))
        assert p.system is sys and sys.state.num_qubits == 4

    def test_none_is_identity(self):
        sys = System(ghz_state(GhzLabel.PSI0))
        p = sys.particle(2)
        assert apply_attack(p, AttackConfig("none"), Rng(1)) is p


# Exact Born-rule detection rates for the GHZ-sample check. Where the
# advertised chart differs (fake |+>/|-> under Z, measure-resend X), the
# simulation is the authority and the gap is surfaced via claimed_value.
GHZ_CASES = [
    (AttackConfig("intercept_resend", "S_C", fake_state="0"), "Z", 0.5),
    (AttackConfig("intercept_resend", "S_C", fake_state="0"), "X", 0.5),
    (AttackConfig("intercept_resend", "S_C", fake_state="1"), "Z", 0.5),
    (AttackConfig("intercept_resend", "S_C", fake_state="1"), "X", 0.5),
    (AttackConfig("intercept_resend", "S_C", fake_state="+"), "Z", 0.5),
    (AttackConfig("intercept_resend", "S_C", fake_state="+"), "X", 0.5),
    (AttackConfig("intercept_resend", "S_C", fake_state="-"), "Z", 0.5),
    (AttackConfig("intercept_resend", "S_C", fake_state="-"), "X", 0.5),
    (AttackConfig("measure_resend", "S_C", eve_basis="Z"), "Z", 0.0),
    (AttackConfig("measure_resend", "S_C", eve_basis="Z"), "X", 0.5),
    (AttackConfig("measure_resend", "S_C", eve_basis="Z"), None, 0.25),
    (AttackConfig("measure_resend", "S_C", eve_basis="X"), "Z", 0.5),
    (AttackConfig("measure_resend", "S_C", eve_basis="X"), "X", 0.0),
    (AttackConfig("measure_resend", "S_C", eve_basis="X"), None, 0.25),
]


class TestExactRates:
    @pytest.mark.parametrize("cfg,basis,expect", GHZ_CASES)
    def test_ghz_check_rates(self, cfg, basis, expect):
        tpl = CheckTemplate(bob_basis=basis)
        assert exact_detection_probability(cfg, tpl) == pytest.approx(expect, abs=1e-12)

    def test_rates_independent_of_sample_label(self):
        for label in (GhzLabel.PSI3, GhzLabel.PSI6):
            tpl = CheckTemplate(sample_label=label, bob_basis="Z")
            cfg = AttackConfig("intercept_resend", "S_C", fake_state="0")
            assert exact_detection_probability(cfg, tpl) == pytest.approx(0.5)

    def test_decoy_check_rates(self):
        assert exact_detection_probability(
            AttackConfig("intercept_resend", "S_B"), CheckTemplate()) == pytest.approx(0.5)
        assert exact_detection_probability(
            AttackConfig("measure_resend", "S_B"), CheckTemplate()) == pytest.approx(0.25)
        assert exact_detection_probability(
            AttackConfig("intercept_resend", "S_A", fake_state="+"),
            CheckTemplate()) == pytest.approx(0.5)

    @pytest.mark.parametrize("beta_sq", [0.0, 0.1, 0.25, 0.5, 1.0])
    def test_entangle_rate_is_flip_probability(self, beta_sq):
        ghz = exact_detection_probability(
            AttackConfig.entangling(beta_sq), CheckTemplate(bob_basis="Z"))
        decoy = exact_detection_probability(
            AttackConfig.entangling(beta_sq, target="S_A"), CheckTemplate(decoy_basis="Z"))
        assert ghz == pytest.approx(beta_sq, abs=1e-12)
        assert decoy == pytest.approx(beta_sq, abs=1e-12)

    def test_entangle_invisible_to_x_decoys(self):
        rate = exact_detection_probability(
            AttackConfig.entangling(0.5, target="S_B"), CheckTemplate(decoy_basis="X"))
        assert rate == pytest.approx(0.0, abs=1e-12)


class TestClaimedRates:
    def test_ghz_chart(self):
        assert claimed_detection_rate(
            AttackConfig("intercept_resend", "S_C", fake_state="0"),
            CheckTemplate(bob_basis="Z")) == 0.5
        assert claimed_detection_rate(
            AttackConfig("intercept_resend", "S_C", fake_state="-"),
            CheckTemplate(bob_basis="Z")) == 0.75
        assert claimed_detection_rate(
            AttackConfig("measure_resend", "S_C", eve_basis="X"), CheckTemplate()) == 0.375
        assert claimed_detection_rate(
            AttackConfig("measure_resend", "S_C", eve_basis="Z"), CheckTemplate()) == 0.25

    def test_decoy_chart(self):
        assert claimed_detection_rate(AttackConfig("intercept_resend", "S_B")) == 0.5
        assert claimed_detection_rate(AttackConfig("measure_resend", "S_A")) == 0.25
        assert claimed_detection_rate(
            AttackConfig.entangling(0.3, target="S_B"),
            CheckTemplate(decoy_basis="Z")) == pytest.approx(0.3)

    def test_none_claims_zero(self):
        assert claimed_detection_rate(AttackConfig("none")) == 0.0


class TestEstimateDetection:
    def test_no_attack_rate_exactly_zero(self):
        est = estimate_detection(AttackConfig("none"), trials=500, seed=0)
        assert est.rate == 0.0 and est.detections == 0

    def test_monte_carlo_tracks_exact(self):
        cases = [
            (AttackConfig("intercept_resend", "S_C", fake_state="+"), CheckTemplate(bob_basis="Z")),
            (AttackConfig("measure_resend", "S_C"), CheckTemplate()),
            (AttackConfig("intercept_resend", "S_B"), CheckTemplate()),
            (AttackConfig.entangling(0.25), CheckTemplate(bob_basis="Z")),
        ]
        for cfg, tpl in cases:
            est = estimate_detection(cfg, tpl, trials=20_000, seed=7)
            assert abs(est.rate - est.exact_value) < 0.015

    def test_deterministic_under_seed(self):
        cfg = AttackConfig("measure_resend", "S_C")
        a = estimate_detection(cfg, trials=2000, seed=5)
        b = estimate_detection(cfg, trials=2000, seed=5)
        assert a == b
        c = estimate_detection(cfg, trials=2000, seed=6)
        assert a.detections != c.detections

    def test_ci_halfwidth(self):
        est = estimate_detection(AttackConfig("intercept_resend", "S_B"),
                                 trials=10_000, seed=1)
        expect = 1.96 * np.sqrt(est.rate * (1 - est.rate) / est.trials)
        assert est.ci95 == pytest.approx(expect)

    def test_json_schema(self):
        est = estimate_detection(AttackConfig("measure_resend", "S_C"), trials=100, seed=2)
        doc = est.to_json_dict()
        assert set(doc) == {"strategy", "target", "params", "trials", "detections",
                            "rate", "per_decoy_rate", "ci95", "exact_value",
                            "claimed_value", "abs_error"}

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            estimate_detection(AttackConfig("none"), trials=0)


class TestAttackLocality:
    def test_attack_on_sb_leaves_other_checks_clean(self):
        attack = AttackConfig("measure_resend", target="S_B")
        cfg = SessionConfig(n_groups=1, seed=11, decoys_step1=20, decoys_step3=20,
                            decoys_step5=20, attack=attack, check_threshold=0.999)
        t = run_session(cfg, "010", "101")
        by_step = {c.step: c for c in t.checks}
        assert by_step[2].errors == 0
        assert by_step[4].errors > 0
        assert by_step[5].errors == 0

    def test_attack_on_sa_only_hits_step5(self):
        attack = AttackConfig("intercept_resend", target="S_A")
        cfg = SessionConfig(n_groups=1, seed=6, decoys_step1=20, decoys_step3=20,
                            decoys_step5=20, attack=attack, check_threshold=0.999)
        t = run_session(cfg, "010", "101")
        by_step = {c.step: c for c in t.checks}
        assert by_step[2].errors == 0 and by_step[4].errors == 0
        assert by_step[5].errors > 0
