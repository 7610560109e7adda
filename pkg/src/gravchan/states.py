"""Finite-dimensional quantum state engine on a labeled sparse basis.

Basis vectors are products of internal spin labels (one per atom) and a
single discrete momentum index carried by the probe atom (the last atom by
convention).  Pure states are sparse maps ket -> complex amplitude; mixed
states are explicit ensembles of pure states.  Operators are defined by
their action on basis vectors and extended linearly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    BasisMismatchError,
    UncoveredBasisVectorError,
    ZeroNormError,
)

NORM_TOL = 1e-12    # unit-norm tolerance after any normalizing operation
PRUNE_TOL = 1e-15   # amplitudes below this magnitude are dropped


class Spin(IntEnum):
    """Internal two-level label, ordered G < E for canonical enumeration."""

    G = 0
    E = 1

    def __str__(self) -> str:
        return "g" if self is Spin.G else "e"


@dataclass(frozen=True)
class BasisVector:
    """Product ket |s_1 s_2 ... s_M> ⊗ |n> with n the probe momentum index.

    The momentum index n means "probe momentum p + n*k"; only the probe atom
    (last spin slot) ever changes it.
    """

    spins: tuple[Spin, ...]
    momentum: int = 0

    @property
    def num_atoms(self) -> int:
        return len(self.spins)

    @property
    def probe_spin(self) -> Spin:
        return self.spins[-1]

    def with_probe(self, spin: Spin, momentum: int) -> "BasisVector":
        return BasisVector(self.spins[:-1] + (spin,), momentum)

    def with_spin(self, atom: int, spin: Spin) -> "BasisVector":
        spins = list(self.spins)
        spins[atom] = spin
        return BasisVector(tuple(spins), self.momentum)

    def ket(self) -> str:
        body = "".join(str(s) for s in self.spins)
        return f"|{body};n={self.momentum:+d}>"


def ket(spins: str | Sequence[Spin], momentum: int = 0) -> BasisVector:
    """Build a basis vector from a spin string such as "ge" (atom 1 first)."""
    if isinstance(spins, str):
        labels = tuple(Spin.G if c in "gG" else Spin.E for c in spins)
    else:
        labels = tuple(spins)
    return BasisVector(labels, momentum)


class PureState:
    """Sparse normalized (unless stated otherwise) complex amplitude map."""

    __slots__ = ("_amps", "_num_atoms")

    def __init__(self, amplitudes: Mapping[BasisVector, complex]):
        counts = {k.num_atoms for k in amplitudes}
        if len(counts) > 1:
            raise BasisMismatchError(f"mixed atom counts in one state: {sorted(counts)}")
        self._num_atoms = counts.pop() if counts else 0
        self._amps = {
            k: complex(v) for k, v in amplitudes.items() if abs(v) >= PRUNE_TOL
        }

    @property
    def num_atoms(self) -> int:
        return self._num_atoms

    def amplitude(self, k: BasisVector) -> complex:
        return self._amps.get(k, 0j)

    def items(self) -> Iterator[tuple[BasisVector, complex]]:
        return iter(self._amps.items())

    def kets(self) -> Iterator[BasisVector]:
        return iter(self._amps.keys())

    def norm_sq(self) -> float:
        return math.fsum(abs(v) ** 2 for v in self._amps.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def overlap(self, other: "PureState") -> complex:
        """<self|other> over the shared basis."""
        if self._num_atoms and other._num_atoms and self._num_atoms != other._num_atoms:
            raise BasisMismatchError(
                f"atom counts differ: {self._num_atoms} vs {other._num_atoms}"
            )
        small, big = (self, other) if len(self._amps) <= len(other._amps) else (other, self)
        acc = 0j
        for k, v in small.items():
            w = big.amplitude(k)
            if w:
                acc += (v.conjugate() * w) if small is self else (w.conjugate() * v)
        return acc

    def scaled(self, factor: complex) -> "PureState":
        return PureState({k: factor * v for k, v in self._amps.items()})

    def __len__(self) -> int:
        return len(self._amps)

    def __repr__(self) -> str:
        terms = sorted(self._amps.items(), key=lambda kv: (kv[0].spins, kv[0].momentum))
        body = " + ".join(f"({v:.6g}){k.ket()}" for k, v in terms)
        return f"PureState({body or '0'})"


@dataclass(frozen=True)
class Ensemble:
    """Classical mixture of pure states: list of (weight, state)."""

    members: tuple[tuple[float, PureState], ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("ensemble needs at least one member")
        if any(w < 0 for w, _ in self.members):
            raise ValueError("ensemble weights must be non-negative")
        total = math.fsum(w for w, _ in self.members)
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"ensemble weights sum to {total}, not 1")

    def expect(self, fn: Callable[[PureState], float]) -> float:
        """Weight-averaged value of a per-state functional."""
        return math.fsum(w * fn(s) for w, s in self.members)

    def map(self, fn: Callable[[PureState], PureState]) -> "Ensemble":
        return Ensemble(tuple((w, fn(s)) for w, s in self.members))


@dataclass(frozen=True)
class BasisOperator:
    """Operator given by its action on basis vectors (linear extension).

    ``rules(ket)`` returns the image as a list of (coefficient, ket) terms, or
    None when the ket is outside the operator's domain.
    """

    rules: Callable[[BasisVector], Sequence[tuple[complex, BasisVector]] | None]
    unitary: bool = False
    name: str = ""


def identity_operator() -> BasisOperator:
    return BasisOperator(lambda k: ((1.0 + 0j, k),), unitary=True, name="identity")


def single_atom_operator(
    atom: int, mapping: Mapping[Spin, Sequence[tuple[complex, Spin]]], *,
    unitary: bool = False, name: str = "",
) -> BasisOperator:
    """Operator acting on one atom's spin, identity elsewhere."""

    def rules(k: BasisVector):
        terms = mapping.get(k.spins[atom])
        if terms is None:
            return None
        return tuple((c, k.with_spin(atom, s)) for c, s in terms)

    return BasisOperator(rules, unitary=unitary, name=name or f"atom{atom}-op")


def normalize(state: PureState) -> PureState:
    """Scale to unit norm.  Raises ZeroNormError below the 1e-24 norm-squared
    floor (the amplitude map is then numerically indistinguishable from 0)."""
    n2 = state.norm_sq()
    if n2 < 1e-24:
        raise ZeroNormError(f"norm squared {n2:.3e} below floor")
    return state.scaled(1.0 / math.sqrt(n2))


def apply(op: BasisOperator, state: PureState) -> PureState:
    """Linear extension of the operator rules to the full amplitude map."""
    out: dict[BasisVector, complex] = {}
    for k, v in state.items():
        image = op.rules(k)
        if image is None:
            raise UncoveredBasisVectorError(
                f"operator {op.name or '<anonymous>'} has no rule for {k.ket()}"
            )
        for c, k2 in image:
            out[k2] = out.get(k2, 0j) + c * v
    return PureState(out)


def project(
    state: PureState, predicate: Callable[[BasisVector], bool]
) -> tuple[float, PureState | None]:
    """Projective measurement onto the kets selected by ``predicate``.

    Returns (probability, renormalized restriction).  Probability 0 is a
    valid outcome and yields None for the state.
    """
    kept = {k: v for k, v in state.items() if predicate(k)}
    p = math.fsum(abs(v) ** 2 for v in kept.values())
    if p <= 0.0:
        return 0.0, None
    scale = 1.0 / math.sqrt(p)
    return p, PureState({k: scale * v for k, v in kept.items()})


def measure_spin(state: PureState, atom: int) -> dict[Spin, float]:
    """Probability of each spin outcome for one atom of a normalized state."""
    if not 0 <= atom < state.num_atoms:
        raise IndexError(f"atom index {atom} out of range for {state.num_atoms} atoms")
    probs = {Spin.G: 0.0, Spin.E: 0.0}
    for k, v in state.items():
        probs[k.spins[atom]] += abs(v) ** 2
    return probs


def fidelity(s1: PureState, s2: PureState) -> float:
    """|<s1|s2>|^2 for states on the same basis configuration."""
    return abs(s1.overlap(s2)) ** 2


def reachable_basis(op: BasisOperator, seeds: Iterable[BasisVector]) -> list[BasisVector]:
    """Closure of the seed kets under the operator's rules (breadth-first)."""
    seen: dict[BasisVector, None] = {}
    frontier = list(seeds)
    while frontier:
        k = frontier.pop()
        if k in seen:
            continue
        seen[k] = None
        image = op.rules(k)
        if image is None:
            raise UncoveredBasisVectorError(f"no rule for {k.ket()}")
        frontier.extend(k2 for _, k2 in image)
    return list(seen)


def check_unitary(
    op: BasisOperator, seeds: Iterable[BasisVector], tol: float = NORM_TOL
) -> bool:
    """Verify U†U = I on the basis reachable from ``seeds``.

    The reachable set must be closed under the rules (true for all operators
    built in this package); columns are checked pairwise for orthonormality.
    """
    basis = reachable_basis(op, seeds)
    columns: list[dict[BasisVector, complex]] = []
    for k in basis:
        col: dict[BasisVector, complex] = {}
        for c, k2 in op.rules(k) or ():
            col[k2] = col.get(k2, 0j) + c
        columns.append(col)
    for i, ci in enumerate(columns):
        for j, cj in enumerate(columns):
            acc = 0j
            for k2, v in ci.items():
                w = cj.get(k2)
                if w is not None:
                    acc += v.conjugate() * w
            want = 1.0 if i == j else 0.0
            if abs(acc - want) > tol:
                return False
    return True
