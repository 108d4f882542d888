"""Registry of few-qubit systems and the particle handles that move between
parties.

A System owns one StateVector; a Particle is a stable handle to one qubit
inside some system. Measurements collapse the owning system in place, and
systems are merged (tensored) on demand when a joint measurement spans two
of them. Handles survive merges.
"""

from __future__ import annotations

from typing import Sequence

from . import qcore
from .qcore import MeasBasis, Rng, SingleQubitOp, StateVector


class Particle:
    __slots__ = ("system", "pos")

    def __init__(self, system: "System", pos: int):
        self.system = system
        self.pos = pos


class System:
    __slots__ = ("state", "particles")

    def __init__(self, state: StateVector):
        self.state = state
        self.particles = [Particle(self, i) for i in range(state.num_qubits)]

    def particle(self, i: int) -> Particle:
        return self.particles[i]


def merge(a: System, b: System) -> System:
    """Tensor b's state onto a's; b's particles are re-homed into a."""
    if a is b:
        return a
    offset = a.state.num_qubits
    a.state = qcore.tensor(a.state, b.state)
    for p in b.particles:
        p.system = a
        p.pos += offset
        a.particles.append(p)
    b.particles = []
    return a


def ensure_joint(particles: Sequence[Particle]) -> System:
    """Merge systems as needed so all given particles share one system."""
    sys0 = particles[0].system
    for p in particles[1:]:
        if p.system is not sys0:
            merge(sys0, p.system)
    return sys0


def apply_op(p: Particle, op: SingleQubitOp) -> None:
    p.system.state = qcore.apply_single(p.system.state, op, p.pos)


def append_ancilla(sys: System, state: StateVector) -> Particle:
    """Tensor a fresh subsystem onto sys; returns the first new particle."""
    offset = sys.state.num_qubits
    sys.state = qcore.tensor(sys.state, state)
    first = None
    for i in range(state.num_qubits):
        p = Particle(sys, offset + i)
        sys.particles.append(p)
        first = first or p
    return first


def measure_particles(basis: MeasBasis, particles: Sequence[Particle], rng: Rng):
    """Projective measurement across particles (merged into one system first).

    Returns the outcome label; the owning system collapses in place.
    """
    sys0 = ensure_joint(particles)
    outcome, collapsed = qcore.measure(sys0.state, basis, [p.pos for p in particles], rng)
    sys0.state = collapsed
    return outcome
