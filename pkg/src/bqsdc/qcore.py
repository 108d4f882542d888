"""Dense state-vector engine for few-qubit protocol simulation.

A state is an immutable vector of complex amplitudes indexed by bitstring,
with qubit 0 in the leftmost (most significant) position so kets transcribe
left to right. All operations are pure functions of their inputs; sampling
randomness enters only through an explicit Rng argument, never through
ambient state.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Hashable, Iterable, Sequence

import numpy as np

from .labels import BellLabel, GhzLabel, bell_amplitudes, ghz_amplitudes

# Tolerances: ATOL for algebraic identities (norms, unitarity, state
# equality), ZERO_TOL below which a probability counts as exactly zero.
ATOL = 1e-9
ZERO_TOL = 1e-12

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(x: int) -> int:
    """SplitMix64 finalizer; a bijection on 64-bit integers."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


class Rng:
    """Counter-based keyed random stream (SplitMix64).

    Draw i of the stream keyed by (seed, stream) is a pure function of
    (seed, stream, i): two instances with the same key replay identical
    sequences, and distinct stream ids give independent sequences, so
    parallel Monte Carlo trials can each take stream = trial index.
    """

    __slots__ = ("seed", "stream", "_state")

    def __init__(self, seed: int, stream: int = 0):
        self.seed = seed & _MASK64
        self.stream = stream & _MASK64
        self._state = _mix64(_mix64(self.seed) + self.stream)

    def u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix64(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return (self.u64() >> 11) * 2.0 ** -53

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        return self.u64() % n

    def choice(self, seq: Sequence):
        return seq[self.randrange(len(seq))]

    def index_sample(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), sorted ascending."""
        if not 0 <= k <= n:
            raise ValueError("need 0 <= k <= n")
        pool = list(range(n))
        for i in range(k):
            j = i + self.randrange(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])

    def substream(self, tag: int) -> "Rng":
        """Derived independent stream; deterministic in (self, tag)."""
        return Rng(self.seed, _mix64(self.stream + _GOLDEN * (tag + 1)))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitude vector over n qubits (length 2**n)."""

    amps: np.ndarray

    def __post_init__(self):
        a = np.array(self.amps, dtype=np.complex128)
        if a.ndim != 1 or a.size < 2 or a.size & (a.size - 1):
            raise ValueError("amplitude vector length must be a power of two >= 2")
        if not np.all(np.isfinite(a.view(np.float64))):
            raise ValueError("amplitudes must be finite")
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"state not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def num_qubits(self) -> int:
        return self.amps.size.bit_length() - 1

    def amplitude(self, bits: str) -> complex:
        if len(bits) != self.num_qubits:
            raise ValueError("bitstring length mismatch")
        return complex(self.amps[int(bits, 2)])


@dataclass(frozen=True, eq=False)
class SingleQubitOp:
    """Named 2x2 unitary acting on a single particle."""

    name: str
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


I = SingleQubitOp("I", [[1, 0], [0, 1]])
SZ = SingleQubitOp("SZ", [[1, 0], [0, -1]])
SX = SingleQubitOp("SX", [[0, 1], [1, 0]])
# i*sigma_y maps |0> to -|1> and |1> to |0>; real-valued like the other three.
ISY = SingleQubitOp("ISY", [[0, 1], [-1, 0]])

SINGLE_OPS = {op.name: op for op in (I, SX, ISY, SZ)}


class MeasBasis(Enum):
    """Projective measurement basis: single-qubit Z or X, two-qubit Bell,
    or three-qubit GHZ."""

    Z = "Z"
    X = "X"
    BELL = "BELL"
    GHZ = "GHZ"

    @property
    def arity(self) -> int:
        return {"Z": 1, "X": 1, "BELL": 2, "GHZ": 3}[self.value]


@lru_cache(maxsize=None)
def basis_outcomes(basis: MeasBasis) -> tuple[tuple[Hashable, np.ndarray], ...]:
    """Ordered (label, unit vector) pairs spanning the measured subsystem."""
    inv = 2.0 ** -0.5
    if basis is MeasBasis.Z:
        pairs = [(0, np.array([1, 0], complex)), (1, np.array([0, 1], complex))]
    elif basis is MeasBasis.X:
        pairs = [("+", np.array([inv, inv], complex)), ("-", np.array([inv, -inv], complex))]
    elif basis is MeasBasis.BELL:
        pairs = [(lab, bell_amplitudes(lab)) for lab in BellLabel]
    else:
        pairs = [(lab, ghz_amplitudes(lab)) for lab in GhzLabel]
    for _, vec in pairs:
        vec.setflags(write=False)
    return tuple(pairs)


def make_basis_state(bits: str) -> StateVector:
    """Computational basis state |bits>."""
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"bits must be a nonempty 0/1 string, got {bits!r}")
    amps = np.zeros(1 << len(bits), dtype=np.complex128)
    amps[int(bits, 2)] = 1.0
    return StateVector(amps)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product with a's qubits first (most significant)."""
    return StateVector(np.kron(a.amps, b.amps))


def apply_single(s: StateVector, op: SingleQubitOp, q: int) -> StateVector:
    """Apply a single-qubit unitary at qubit index q."""
    n = s.num_qubits
    if not 0 <= q < n:
        raise IndexError(f"qubit {q} out of range for {n} qubits")
    t = np.moveaxis(s.amps.reshape((2,) * n), q, 0).reshape(2, -1)
    out = op.matrix @ t
    out = np.moveaxis(out.reshape((2,) * n), 0, q)
    return StateVector(out.reshape(-1))


def apply_unitary(s: StateVector, matrix: np.ndarray, qubits: Sequence[int]) -> StateVector:
    """Apply a k-qubit unitary to the given (distinct) qubit indices."""
    n = s.num_qubits
    qs = list(qubits)
    k = len(qs)
    if len(set(qs)) != k or any(not 0 <= q < n for q in qs):
        raise IndexError(f"bad qubit indices {qubits} for {n} qubits")
    rest = [i for i in range(n) if i not in qs]
    perm = qs + rest
    t = s.amps.reshape((2,) * n).transpose(perm).reshape(1 << k, -1)
    out = (np.asarray(matrix, dtype=np.complex128) @ t).reshape((2,) * n)
    inv = np.argsort(perm)
    return StateVector(out.transpose(inv).reshape(-1))


def _grouped(amps: np.ndarray, n: int, qubits: Sequence[int]) -> tuple[np.ndarray, list[int]]:
    """Reshape amplitudes to (2**k, rest) with the measured qubits in front."""
    qs = list(qubits)
    rest = [i for i in range(n) if i not in qs]
    perm = qs + rest
    return amps.reshape((2,) * n).transpose(perm).reshape(1 << len(qs), -1), perm


def _collapse(mat: np.ndarray, vec: np.ndarray, proj: np.ndarray, prob: float,
              n: int, perm: list[int]) -> np.ndarray:
    """Post-measurement amplitudes given the projection coefficients."""
    out = np.outer(vec, proj / np.sqrt(prob)).reshape((2,) * n)
    return out.transpose(np.argsort(perm)).reshape(-1)


def _check_measurement_args(s: StateVector, basis: MeasBasis, qubits: Sequence[int]) -> list[int]:
    qs = list(qubits)
    if len(qs) != basis.arity:
        raise ValueError(f"{basis.value} basis measures {basis.arity} qubits, got {len(qs)}")
    if len(set(qs)) != len(qs):
        raise ValueError("qubit indices must be distinct")
    if any(not 0 <= q < s.num_qubits for q in qs):
        raise IndexError(f"qubit indices {qs} out of range")
    return qs


def born_distribution(s: StateVector, basis: MeasBasis, qubits: Sequence[int]) -> dict:
    """Exact outcome probabilities for a projective measurement.

    Returns the full map over basis labels; probabilities sum to one.
    """
    qs = _check_measurement_args(s, basis, qubits)
    mat, _ = _grouped(s.amps, s.num_qubits, qs)
    dist = {}
    for label, vec in basis_outcomes(basis):
        proj = vec.conj() @ mat
        dist[label] = float(np.vdot(proj, proj).real)
    return dist


def measure(s: StateVector, basis: MeasBasis, qubits: Sequence[int], rng: Rng):
    """Sample one outcome by the Born rule and collapse.

    Returns (outcome label, collapsed StateVector). Re-measuring the same
    qubits in the same basis then reproduces the outcome with certainty.
    """
    qs = _check_measurement_args(s, basis, qubits)
    n = s.num_qubits
    mat, perm = _grouped(s.amps, n, qs)
    outcomes = basis_outcomes(basis)
    projs = [vec.conj() @ mat for _, vec in outcomes]
    probs = [float(np.vdot(p, p).real) for p in projs]
    r = rng.random()
    acc = 0.0
    pick = None
    for idx, p in enumerate(probs):
        acc += p
        if r < acc and p > ZERO_TOL:
            pick = idx
            break
    if pick is None:  # numerical guard: fall back to the largest outcome
        pick = max(range(len(probs)), key=probs.__getitem__)
    label, vec = outcomes[pick]
    amps = _collapse(mat, vec, projs[pick], probs[pick], n, perm)
    return label, StateVector(amps)


def measurement_branches(s: StateVector, basis: MeasBasis,
                         qubits: Sequence[int]) -> list[tuple]:
    """All (label, probability, collapsed state) branches of one projective
    measurement, zero-probability outcomes dropped."""
    qs = _check_measurement_args(s, basis, qubits)
    n = s.num_qubits
    mat, perm = _grouped(s.amps, n, qs)
    branches = []
    for label, vec in basis_outcomes(basis):
        proj = vec.conj() @ mat
        p = float(np.vdot(proj, proj).real)
        if p <= ZERO_TOL:
            continue
        branches.append((label, p, StateVector(_collapse(mat, vec, proj, p, n, perm))))
    return branches


def joint_distribution(s: StateVector, basis: MeasBasis,
                       groups: Iterable[Sequence[int]]) -> dict[tuple, float]:
    """Joint distribution of the same-basis measurement applied to several
    disjoint qubit groups, by exact branch expansion.

    Keys are outcome tuples in group order; zero-probability branches are
    dropped, so the keys are exactly the support.
    """
    branches: list[tuple[tuple, float, np.ndarray]] = [((), 1.0, s.amps)]
    n = s.num_qubits
    for qs in groups:
        qs = list(qs)
        nxt = []
        for outs, prob, amps in branches:
            mat, perm = _grouped(amps, n, qs)
            for label, vec in basis_outcomes(basis):
                proj = vec.conj() @ mat
                p = float(np.vdot(proj, proj).real)
                if p <= ZERO_TOL:
                    continue
                nxt.append((outs + (label,), prob * p,
                            _collapse(mat, vec, proj, p, n, perm)))
        branches = nxt
    return {outs: prob for outs, prob, _ in branches}


def equal_up_to_global_phase(a: StateVector, b: StateVector, tol: float = ATOL) -> bool:
    """True iff a = c * b for some unit-modulus scalar c, within tol."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("qubit count mismatch")
    ov = np.vdot(b.amps, a.amps)
    c = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(a.amps - c * b.amps)) <= tol
