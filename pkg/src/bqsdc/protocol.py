"""The seven-step bidirectional secure direct communication session.

One session: Alice prepares N groups of two identical GHZ triples and
distributes the particles into three sequences; the third-particle sequence
travels first, guarded by GHZ samples (step 2 check). Alice encodes her
three bits per group on the first triple, then ships the second-particle
sequence and finally the first-particle sequence, each guarded by
single-particle decoys (step 4 and step 5 checks). Bob identifies the
prepared state of each group by a GHZ measurement on the untouched second
triple, rebuilds it, encodes his own three bits on it, swaps entanglement
between the two triples with three Bell measurements, and announces which
outcome collection occurred. Each side then infers the other's operation
from the announcement, its own operation, and the initial state.

Every random draw comes from one keyed stream, so a transcript is a pure
function of the configuration (byte-identical across runs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .adversary import AttackConfig, apply_attack
from .checks import DECOY_STATES, DECOY_TOKENS, decoy_state, ghz_sample_ok
from .codebook import (CompositeOp, MessageTriple, ghz_state, invert_transform,
                       message_to_op, op_to_message, transform_label)
from .labels import CollectionLabel, GhzLabel
from .particles import Particle, System, apply_op, measure_particles
from .qcore import MeasBasis, Rng
from .swap import BellTriple, collection_of, collection_table

def default_decoy_count(n_groups: int) -> int:
    """Per-check decoy count used when the config leaves it unset: enough to
    make detection overwhelming, without dominating small desk runs."""
    return 16 if n_groups <= 16 else n_groups


@dataclass(frozen=True)
class SessionConfig:
    """Configuration of one deterministic session."""

    n_groups: int
    seed: int = 0
    decoys_step1: int | None = None
    decoys_step3: int | None = None
    decoys_step5: int | None = None
    check_threshold: float = 0.0
    attack: AttackConfig | None = None
    initial_label: GhzLabel | None = None  # force every group's prepared state

    def __post_init__(self):
        if self.n_groups < 1:
            raise ValueError("need at least one message group")
        if not 0.0 <= self.check_threshold < 1.0:
            raise ValueError("check_threshold must lie in [0, 1)")
        for count in (self.decoys_step1, self.decoys_step3, self.decoys_step5):
            if count is not None and count < 0:
                raise ValueError("decoy counts must be nonnegative")

    def resolved_decoys(self) -> tuple[int, int, int]:
        d = default_decoy_count(self.n_groups)
        return (
            self.decoys_step1 if self.decoys_step1 is not None else d,
            self.decoys_step3 if self.decoys_step3 is not None else d,
            self.decoys_step5 if self.decoys_step5 is not None else d,
        )

    def to_json_dict(self) -> dict:
        d1, d3, d5 = self.resolved_decoys()
        attack = None
        if self.attack is not None:
            attack = {
                "strategy": self.attack.strategy,
                "target": self.attack.target,
                "fake_state": self.attack.fake_state,
                "eve_basis": self.attack.eve_basis,
                "beta_squared": round(self.attack.beta ** 2, 12),
            }
        return {
            "n_groups": self.n_groups,
            "seed": self.seed,
            "decoys_step1": d1,
            "decoys_step3": d3,
            "decoys_step5": d5,
            "check_threshold": self.check_threshold,
            "attack": attack,
            "initial_label": self.initial_label.token if self.initial_label else None,
        }


@dataclass
class CheckRecord:
    step: int
    samples: int
    errors: int
    error_rate: float
    aborted: bool
    # per-decoy details (position, state, basis, ok); kept out of the JSON
    decoys: list[dict] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "step": self.step,
            "samples": self.samples,
            "errors": self.errors,
            "error_rate": self.error_rate,
            "aborted": self.aborted,
        }


@dataclass
class GroupRecord:
    """Everything the transcript keeps about one message group."""

    index: int
    prepared_label: GhzLabel
    a_op: CompositeOp | None = None
    p_label: GhzLabel | None = None
    b_op: CompositeOp | None = None
    bell_triple: BellTriple | None = None
    announcement: CollectionLabel | None = None
    decoded_by_alice: str | None = None
    decoded_by_bob: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "n": self.index,
            "prepared_label": self.prepared_label.token,
            "a_op": self.a_op.token if self.a_op is not None else None,
            "p_label": self.p_label.token if self.p_label is not None else None,
            "b_op": self.b_op.token if self.b_op is not None else None,
            "bell_triple": self.bell_triple.token if self.bell_triple else None,
            "announcement": self.announcement.token if self.announcement is not None else None,
            "decoded_by_alice": self.decoded_by_alice,
            "decoded_by_bob": self.decoded_by_bob,
        }


@dataclass
class SessionTranscript:
    """Deterministic record of one session."""

    config: SessionConfig
    groups: list[GroupRecord] = field(default_factory=list)
    checks: list[CheckRecord] = field(default_factory=list)
    abort_step: int | None = None

    @property
    def aborted(self) -> bool:
        return self.abort_step is not None

    def alice_message_bits(self) -> str | None:
        """Bob's secrets as decoded by Alice, concatenated; None on abort."""
        if self.aborted:
            return None
        return "".join(g.decoded_by_alice for g in self.groups)

    def bob_message_bits(self) -> str | None:
        if self.aborted:
            return None
        return "".join(g.decoded_by_bob for g in self.groups)

    def to_json_dict(self) -> dict:
        from . import __version__
        return {
            "version": __version__,
            "config": self.config.to_json_dict(),
            "groups": [g.to_json_dict() for g in self.groups],
            "checks": [c.to_json_dict() for c in self.checks],
            "abort": {"aborted": self.aborted, "step": self.abort_step},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def message_triples(bits: str, n_groups: int) -> list[MessageTriple]:
    """Split a 0/1 string into 3-bit triples, validating its length."""
    if len(bits) != 3 * n_groups or any(c not in "01" for c in bits):
        raise ValueError(f"need exactly {3 * n_groups} message bits of 0/1")
    return [(int(bits[3 * i]), int(bits[3 * i + 1]), int(bits[3 * i + 2]))
            for i in range(n_groups)]


def random_message_bits(n_groups: int, rng: Rng) -> str:
    return "".join(str(rng.randrange(2)) for _ in range(3 * n_groups))


def infer_op_from_announcement(initial: GhzLabel, own_op: CompositeOp,
                               announcement: CollectionLabel,
                               own_side: str) -> CompositeOp:
    """Deduce the counterpart's operation from the announced collection.

    own_side is "first" when the decoder encoded the first triple of the
    swapped pair (Alice) and "second" for the second triple (Bob).
    """
    own_label = transform_label(initial, own_op)
    for other in GhzLabel:
        pair = (own_label, other) if own_side == "first" else (other, own_label)
        if collection_table(*pair) == announcement:
            return invert_transform(initial, other)
    raise ValueError(f"announcement {announcement.token} matches no state")  # unreachable


def alice_decode(prepared: GhzLabel, a_op: CompositeOp,
                 announcement: CollectionLabel) -> MessageTriple:
    """Bob's message bits for one group, from Alice's knowledge."""
    return op_to_message(infer_op_from_announcement(prepared, a_op, announcement, "first"))


def bob_decode(measured: GhzLabel, b_op: CompositeOp,
               announcement: CollectionLabel) -> MessageTriple:
    """Alice's message bits for one group, from Bob's knowledge."""
    return op_to_message(infer_op_from_announcement(measured, b_op, announcement, "second"))


@dataclass
class _Entry:
    """One slot of a transmitted particle sequence."""

    particle: Particle
    kind: str                      # "data" | "sample" | "decoy"
    group: int | None = None       # data: 0-based group index
    parity: str | None = None      # data: "odd" | "even"
    sample: "_GhzSample | None" = None
    decoy_token: str | None = None


@dataclass
class _GhzSample:
    label: GhzLabel
    a: Particle
    b: Particle
    c: Particle


class Session:
    """Single-threaded deterministic run of the seven protocol steps.

    Use run_session for the whole pipeline; the step methods exist so tests
    and experiments can drive or inspect intermediate states.
    """

    def __init__(self, cfg: SessionConfig, alice_bits: str, bob_bits: str):
        self.cfg = cfg
        self.alice_ops = [message_to_op(t) for t in message_triples(alice_bits, cfg.n_groups)]
        self.bob_ops = [message_to_op(t) for t in message_triples(bob_bits, cfg.n_groups)]
        self.rng = Rng(cfg.seed)
        self.transcript = SessionTranscript(config=cfg)
        # Particle handles the receiving side ends up holding, index 2n for
        # group n's odd triple and 2n+1 for its even triple.
        self.slots: dict[str, list[Particle]] = {"S_A": [], "S_B": [], "S_C": []}
        # Transmitted sequences, including in-flight samples and decoys.
        self.seqs: dict[str, list[_Entry]] = {"S_A": [], "S_B": [], "S_C": []}
        self.prepared: list[GhzLabel] = []
        self.measured_labels: list[GhzLabel | None] = [None] * cfg.n_groups

    # -- step 1 ----------------------------------------------------------

    def prepare(self) -> None:
        """Draw labels, build two identical GHZ triples per group, insert
        aligned GHZ samples, and transmit the third-particle sequence."""
        cfg = self.cfg
        d1, _, _ = cfg.resolved_decoys()
        for n in range(cfg.n_groups):
            label = cfg.initial_label if cfg.initial_label is not None \
                else GhzLabel(self.rng.randrange(8))
            self.prepared.append(label)
            self.transcript.groups.append(GroupRecord(index=n + 1, prepared_label=label))
            for _ in ("odd", "even"):
                sys = System(ghz_state(label))
                self.slots["S_A"].append(sys.particle(0))
                self.slots["S_B"].append(sys.particle(1))
                self.slots["S_C"].append(sys.particle(2))

        samples = []
        for _ in range(d1):
            label = GhzLabel(self.rng.randrange(8))
            sys = System(ghz_state(label))
            samples.append(_GhzSample(label, sys.particle(0), sys.particle(1), sys.particle(2)))

        total = 2 * cfg.n_groups + d1
        positions = set(self.rng.index_sample(total, d1))
        # Sample particles go to the same index in all three sequences so
        # the triples stay aligned for the correlation check.
        data_i, sample_i = 0, 0
        for pos in range(total):
            if pos in positions:
                s = samples[sample_i]
                sample_i += 1
                self.seqs["S_A"].append(_Entry(s.a, "sample", sample=s))
                self.seqs["S_B"].append(_Entry(s.b, "sample", sample=s))
                self.seqs["S_C"].append(_Entry(s.c, "sample", sample=s))
            else:
                n, parity = data_i // 2, ("odd" if data_i % 2 == 0 else "even")
                for name in ("S_A", "S_B", "S_C"):
                    self.seqs[name].append(_Entry(self.slots[name][data_i], "data",
                                                  group=n, parity=parity))
                data_i += 1
        self._transmit("S_C")

    def _transmit(self, name: str) -> None:
        cfg = self.cfg.attack
        if cfg is None or cfg.strategy == "none" or cfg.target != name:
            return
        for entry in self.seqs[name]:
            entry.particle = apply_attack(entry.particle, cfg, self.rng)

    # -- step 2 ----------------------------------------------------------

    def check1(self) -> CheckRecord:
        """GHZ-sample correlation check on the delivered third particles."""
        errors, records = 0, []
        samples = [(i, e) for i, e in enumerate(self.seqs["S_C"]) if e.kind == "sample"]
        for pos, entry in samples:
            basis = MeasBasis.Z if self.rng.randrange(2) == 0 else MeasBasis.X
            c_out = measure_particles(basis, [entry.particle], self.rng)
            a_out = measure_particles(basis, [entry.sample.a], self.rng)
            b_out = measure_particles(basis, [entry.sample.b], self.rng)
            ok = ghz_sample_ok(entry.sample.label, basis, (a_out, b_out, c_out))
            errors += not ok
            records.append({"position": pos, "kind": "ghz_sample",
                            "state": entry.sample.label.token,
                            "basis": basis.value, "ok": ok})
        return self._record_check(2, len(samples), errors, records)

    def _record_check(self, step: int, samples: int, errors: int,
                      decoy_records: list[dict]) -> CheckRecord:
        rate = errors / samples if samples else 0.0
        rec = CheckRecord(step, samples, errors, rate,
                          rate > self.cfg.check_threshold, decoy_records)
        self.transcript.checks.append(rec)
        if rec.aborted:
            self.transcript.abort_step = step
        return rec

    def _strip_decoys(self, name: str) -> None:
        kept = [e for e in self.seqs[name] if e.kind == "data"]
        # In-flight substitution may have replaced handles; refresh slots.
        for e in kept:
            self.slots[name][2 * e.group + (e.parity == "even")] = e.particle
        self.seqs[name] = kept

    # -- step 3 ----------------------------------------------------------

    def alice_encode(self) -> None:
        """Encode Alice's bits on the odd triples, then send the
        second-particle sequence with fresh single-particle decoys."""
        self._strip_decoys("S_C")
        self._strip_decoys("S_A")
        self._strip_decoys("S_B")
        for n, op in enumerate(self.alice_ops):
            apply_op(self.slots["S_A"][2 * n], op.first)
            apply_op(self.slots["S_B"][2 * n], op.second)
            self.transcript.groups[n].a_op = op
        _, d3, _ = self.cfg.resolved_decoys()
        self._insert_decoys("S_B", d3)
        self._transmit("S_B")

    def _insert_decoys(self, name: str, count: int) -> None:
        decoys = []
        for _ in range(count):
            token = DECOY_TOKENS[self.rng.randrange(4)]
            decoys.append(_Entry(System(decoy_state(token)).particle(0),
                                 "decoy", decoy_token=token))
        data_entries = self.seqs[name]
        total = len(data_entries) + count
        positions = set(self.rng.index_sample(total, count))
        out, data_i, decoy_i = [], 0, 0
        for pos in range(total):
            if pos in positions:
                out.append(decoys[decoy_i])
                decoy_i += 1
            else:
                out.append(data_entries[data_i])
                data_i += 1
        self.seqs[name] = out

    # -- steps 4 and 5 ---------------------------------------------------

    def check2(self) -> CheckRecord:
        """Decoy check on the delivered second-particle sequence."""
        return self._decoy_check(4, "S_B")

    def check3(self) -> CheckRecord:
        """Send the first-particle sequence with fresh decoys, then check."""
        _, _, d5 = self.cfg.resolved_decoys()
        self._insert_decoys("S_A", d5)
        self._transmit("S_A")
        return self._decoy_check(5, "S_A")

    def _decoy_check(self, step: int, name: str) -> CheckRecord:
        errors, records = 0, []
        decoys = [(i, e) for i, e in enumerate(self.seqs[name]) if e.kind == "decoy"]
        for pos, entry in decoys:
            prep = DECOY_STATES[entry.decoy_token]
            out = measure_particles(prep.basis, [entry.particle], self.rng)
            ok = out == prep.expected
            errors += not ok
            records.append({"position": pos, "kind": "single", "state": prep.token,
                            "basis": prep.basis.value, "ok": ok})
        return self._record_check(step, len(decoys), errors, records)

    # -- step 6 ----------------------------------------------------------

    def bob_encode(self) -> None:
        """Identify each group's prepared state from the even triple,
        rebuild it fresh, and encode Bob's bits on it."""
        self._strip_decoys("S_B")
        self._strip_decoys("S_A")
        for n, op in enumerate(self.bob_ops):
            i = 2 * n + 1
            held = [self.slots["S_A"][i], self.slots["S_B"][i], self.slots["S_C"][i]]
            p_label = measure_particles(MeasBasis.GHZ, held, self.rng)
            self.measured_labels[n] = p_label
            fresh = System(ghz_state(p_label))
            self.slots["S_A"][i] = fresh.particle(0)
            self.slots["S_B"][i] = fresh.particle(1)
            self.slots["S_C"][i] = fresh.particle(2)
            apply_op(self.slots["S_A"][i], op.first)
            apply_op(self.slots["S_B"][i], op.second)
            self.transcript.groups[n].p_label = p_label
            self.transcript.groups[n].b_op = op

    # -- step 7 ----------------------------------------------------------

    def swap_and_announce(self) -> list[CollectionLabel]:
        """Bell-measure the three cross pairs of each group and announce the
        outcome collection over the (ideal) classical channel."""
        announcements = []
        for n in range(self.cfg.n_groups):
            odd, even = 2 * n, 2 * n + 1
            outs = []
            for pair in ((self.slots["S_A"][odd], self.slots["S_A"][even]),
                         (self.slots["S_B"][odd], self.slots["S_B"][even]),
                         (self.slots["S_C"][odd], self.slots["S_C"][even])):
                outs.append(measure_particles(MeasBasis.BELL, pair, self.rng))
            triple = BellTriple(*outs)
            m = collection_of(triple)
            announcements.append(m)
            rec = self.transcript.groups[n]
            rec.bell_triple = triple
            rec.announcement = m
        return announcements

    def decode(self) -> None:
        for n in range(self.cfg.n_groups):
            rec = self.transcript.groups[n]
            a_bits = alice_decode(self.prepared[n], self.alice_ops[n], rec.announcement)
            b_bits = bob_decode(self.measured_labels[n], self.bob_ops[n], rec.announcement)
            rec.decoded_by_alice = "".join(map(str, a_bits))
            rec.decoded_by_bob = "".join(map(str, b_bits))

    # ---------------------------------------------------------------------

    def run(self) -> SessionTranscript:
        self.prepare()
        if self.check1().aborted:
            return self.transcript
        self.alice_encode()
        if self.check2().aborted:
            return self.transcript
        if self.check3().aborted:
            return self.transcript
        self.bob_encode()
        self.swap_and_announce()
        self.decode()
        return self.transcript


def run_session(cfg: SessionConfig, alice_bits: str, bob_bits: str) -> SessionTranscript:
    """Execute the seven steps in order; on a failed check the transcript
    carries the abort step and no decoded messages."""
    return Session(cfg, alice_bits, bob_bits).run()
