import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bqsdc import qcore
from bqsdc.labels import BellLabel, GhzLabel, ghz_amplitudes
from bqsdc.qcore import (ATOL, ISY, SX, SZ, I, MeasBasis, Rng, StateVector,
                         apply_single, apply_unitary, basis_outcomes,
                         born_distribution, equal_up_to_global_phase,
                         joint_distribution, make_basis_state, measure, tensor)

INV = 2 ** -0.5


def random_state(num_qubits: int, seed: int) -> StateVector:
    rng = Rng(seed)
    re = np.array([rng.random() - 0.5 for _ in range(2 ** num_qubits)])
    im = np.array([rng.random() - 0.5 for _ in range(2 ** num_qubits)])
    amps = re + 1j * im
    return StateVector(amps / np.linalg.norm(amps))


class TestStateVector:
    def test_basis_state_indexing(self):
        assert make_basis_state("000").amps[0] == 1
        assert make_basis_state("1").amps[1] == 1
        # index convention: qubit 0 is the most significant bit
        assert make_basis_state("10").amps[2] == 1

    def test_rejects_bad_bits(self):
        with pytest.raises(ValueError):
            make_basis_state("")
        with pytest.raises(ValueError):
            make_basis_state("012")

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            StateVector([1.0, 1.0])
        with pytest.raises(ValueError):
            StateVector([0.5, 0.5, 0.5])  # not a power-of-two length

    def test_amps_are_frozen(self):
        s = make_basis_state("0")
        with pytest.raises(ValueError):
            s.amps[0] = 0.0


class TestTensor:
    def test_zero_one(self):
        assert tensor(make_basis_state("0"), make_basis_state("1")).amplitude("01") == 1

    def test_double_ghz_expansion(self):
        # hand expansion of the two-triple product: amplitude 1/2 at the
        # four indices 000000, 000111, 111000, 111111
        s = tensor(StateVector(ghz_amplitudes(GhzLabel.PSI0)),
                   StateVector(ghz_amplitudes(GhzLabel.PSI0)))
        expect = np.zeros(64)
        for idx in (0, 7, 56, 63):
            expect[idx] = 0.5
        assert np.allclose(s.amps, expect)

    @given(st.integers(0, 2 ** 31), st.integers(1, 3), st.integers(1, 3))
    @settings(max_examples=30, deadline=None)
    def test_norm_multiplicative(self, seed, na, nb):
        a = random_state(na, seed)
        b = random_state(nb, seed + 1)
        assert abs(np.linalg.norm(tensor(a, b).amps) - 1) < ATOL


class TestSingleQubitOps:
    def test_matrices_match_definitions(self):
        assert np.array_equal(I.matrix, np.eye(2))
        assert np.array_equal(SZ.matrix, [[1, 0], [0, -1]])
        assert np.array_equal(SX.matrix, [[0, 1], [1, 0]])
        assert np.array_equal(ISY.matrix, [[0, 1], [-1, 0]])

    def test_all_real_and_unitary(self):
        for op in (I, SX, ISY, SZ):
            assert np.allclose(op.matrix.imag, 0)
            assert np.allclose(op.matrix.conj().T @ op.matrix, np.eye(2), atol=1e-12)

    def test_isy_squared_is_minus_identity(self):
        assert np.allclose(ISY.matrix @ ISY.matrix, -np.eye(2), atol=1e-12)

    def test_pauli_products(self):
        assert np.allclose(SX.matrix @ SZ.matrix, -ISY.matrix, atol=1e-12)
        assert np.allclose(SZ.matrix @ SX.matrix, ISY.matrix, atol=1e-12)

    def test_sx_flips(self):
        assert apply_single(make_basis_state("0"), SX, 0).amplitude("1") == 1

    def test_isy_on_zero_gives_minus_one(self):
        s = apply_single(make_basis_state("0"), ISY, 0)
        assert s.amplitude("1") == -1

    def test_szsz_fixes_ghz(self):
        ghz = StateVector(ghz_amplitudes(GhzLabel.PSI0))
        out = apply_single(apply_single(ghz, SZ, 0), SZ, 1)
        assert np.allclose(out.amps, ghz.amps)  # exactly, phase +1

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            apply_single(make_basis_state("0"), SX, 1)

    @given(st.integers(0, 2 ** 31), st.sampled_from(["I", "SX", "ISY", "SZ"]), st.integers(0, 2))
    @settings(max_examples=50, deadline=None)
    def test_norm_preserved(self, seed, name, q):
        s = random_state(3, seed)
        out = apply_single(s, qcore.SINGLE_OPS[name], q)
        assert abs(np.linalg.norm(out.amps) - 1) < ATOL


class TestBases:
    def test_arities(self):
        assert [b.arity for b in MeasBasis] == [1, 1, 2, 3]

    @pytest.mark.parametrize("basis", list(MeasBasis))
    def test_orthonormal_complete(self, basis):
        vecs = [v for _, v in basis_outcomes(basis)]
        dim = 2 ** basis.arity
        assert len(vecs) == dim
        gram = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
        assert np.allclose(gram, np.eye(dim), atol=ATOL)
        total = sum(np.outer(v, v.conj()) for v in vecs)
        assert np.allclose(total, np.eye(dim), atol=ATOL)


class TestBornDistribution:
    def test_z_on_plus(self):
        plus = StateVector([INV, INV])
        assert born_distribution(plus, MeasBasis.Z, [0]) == pytest.approx({0: 0.5, 1: 0.5})

    def test_ghz_eigenstate(self):
        s = StateVector(ghz_amplitudes(GhzLabel.PSI3))
        dist = born_distribution(s, MeasBasis.GHZ, [0, 1, 2])
        assert dist[GhzLabel.PSI3] == pytest.approx(1.0)
        assert sum(dist.values()) == pytest.approx(1.0)

    def test_bell_marginal_on_double_ghz(self):
        s = tensor(StateVector(ghz_amplitudes(GhzLabel.PSI0)),
                   StateVector(ghz_amplitudes(GhzLabel.PSI0)))
        dist = born_distribution(s, MeasBasis.BELL, [0, 3])
        for lab in BellLabel:
            assert dist[lab] == pytest.approx(0.25)

    def test_joint_bell_uniform_eighth(self):
        s = tensor(StateVector(ghz_amplitudes(GhzLabel.PSI0)),
                   StateVector(ghz_amplitudes(GhzLabel.PSI0)))
        joint = joint_distribution(s, MeasBasis.BELL, [(0, 3), (1, 4), (2, 5)])
        assert len(joint) == 8
        for p in joint.values():
            assert p == pytest.approx(0.125, abs=ATOL)

    def test_arity_mismatch(self):
        with pytest.raises(ValueError):
            born_distribution(make_basis_state("00"), MeasBasis.BELL, [0])

    @given(st.integers(0, 2 ** 31), st.sampled_from(list(MeasBasis)))
    @settings(max_examples=40, deadline=None)
    def test_sums_to_one(self, seed, basis):
        s = random_state(4, seed)
        dist = born_distribution(s, basis, list(range(basis.arity)))
        assert sum(dist.values()) == pytest.approx(1.0, abs=ATOL)


class TestMeasure:
    def test_certain_outcome(self):
        out, post = measure(make_basis_state("1"), MeasBasis.Z, [0], Rng(1))
        assert out == 1 and post.amplitude("1") == 1

    def test_ghz_eigenstate_fixed(self):
        s = StateVector(ghz_amplitudes(GhzLabel.PSI5))
        out, post = measure(s, MeasBasis.GHZ, [0, 1, 2], Rng(9))
        assert out == GhzLabel.PSI5
        assert equal_up_to_global_phase(post, s)

    def test_repeat_reproduces(self):
        s = random_state(3, 77)
        rng = Rng(4)
        out1, post = measure(s, MeasBasis.BELL, [0, 2], rng)
        out2, _ = measure(post, MeasBasis.BELL, [0, 2], rng)
        assert out1 == out2

    def test_deterministic_given_stream(self):
        s = random_state(2, 5)
        seq1 = [measure(s, MeasBasis.Z, [0], Rng(3, stream=t))[0] for t in range(40)]
        seq2 = [measure(s, MeasBasis.Z, [0], Rng(3, stream=t))[0] for t in range(40)]
        assert seq1 == seq2

    def test_empirical_frequencies_match_born(self):
        # frozen oracle: exact Born weights for this state are 0.36 / 0.64
        s = StateVector([0.6, 0.8])
        dist = born_distribution(s, MeasBasis.Z, [0])
        assert dist == pytest.approx({0: 0.36, 1: 0.64})
        trials = 100_000
        ones = sum(measure(s, MeasBasis.Z, [0], Rng(11, stream=t))[0] for t in range(trials))
        assert abs(ones / trials - dist[1]) < 0.01


class TestGlobalPhase:
    def test_sign_flip_equal(self):
        s = StateVector(ghz_amplitudes(GhzLabel.PSI2))
        neg = StateVector(-ghz_amplitudes(GhzLabel.PSI2))
        assert equal_up_to_global_phase(s, neg)

    def test_orthogonal_not_equal(self):
        a = StateVector(ghz_amplitudes(GhzLabel.PSI2))
        b = StateVector(ghz_amplitudes(GhzLabel.PSI3))
        assert not equal_up_to_global_phase(a, b)

    @given(st.integers(0, 2 ** 31), st.floats(0, 2 * math.pi))
    @settings(max_examples=40, deadline=None)
    def test_any_phase_equal(self, seed, theta):
        s = random_state(2, seed)
        rotated = StateVector(np.exp(1j * theta) * s.amps)
        assert equal_up_to_global_phase(s, rotated)


class TestRng:
    def test_same_key_same_sequence(self):
        a = Rng(123, stream=7)
        b = Rng(123, stream=7)
        assert [a.u64() for _ in range(10)] == [b.u64() for _ in range(10)]

    def test_streams_differ(self):
        assert [Rng(1, 0).u64() for _ in range(4)] != [Rng(1, 1).u64() for _ in range(4)]

    def test_substream_deterministic(self):
        assert Rng(5, 2).substream(3).u64() == Rng(5, 2).substream(3).u64()
        assert Rng(5, 2).substream(3).u64() != Rng(5, 2).substream(4).u64()

    def test_index_sample(self):
        rng = Rng(8)
        picks = rng.index_sample(10, 4)
        assert picks == sorted(set(picks)) and all(0 <= i < 10 for i in picks)
        assert rng.index_sample(5, 0) == []

    @given(st.integers(0, 2 ** 60))
    @settings(max_examples=30, deadline=None)
    def test_random_in_unit_interval(self, seed):
        r = Rng(seed).random()
        assert 0.0 <= r < 1.0


def test_apply_unitary_two_qubit():
    swap_mat = np.eye(4)[[0, 2, 1, 3]]
    s = apply_unitary(make_basis_state("10"), swap_mat, (0, 1))
    assert s.amplitude("01") == 1
