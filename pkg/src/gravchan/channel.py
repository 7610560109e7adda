"""Quantum-channel construction: cavity-mediated Bell pairs, general two-atom
channels a|ge> + b|eg>, M-atom cat channels, and the classically correlated
mixture.

Entanglement preparation models two atoms transiting a single-mode cavity in
sequence, exchanging at most one photon.  ``omega_t`` is the Rabi pulse area
Omega*t of a transit; amplitudes rotate by half the area, so area pi/2 puts a
photon into an equal superposition and area pi swaps it completely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .errors import InvalidSpecError, ResidualPhotonError
from .states import NORM_TOL, PRUNE_TOL, Ensemble, PureState, Spin, ket

SQRT_HALF = 1.0 / math.sqrt(2.0)

CavityKet = tuple[tuple[Spin, ...], int]  # (atom spins, photon number 0 or 1)


@dataclass(frozen=True)
class CavityState:
    """Joint state of the transiting atoms and the cavity photon mode.

    ``coupled_atom`` is the atom currently inside the cavity; only that atom
    exchanges excitation with the photon mode.
    """

    amplitudes: Mapping[CavityKet, complex]
    coupled_atom: int

    def __post_init__(self) -> None:
        if any(photon not in (0, 1) for _, photon in self.amplitudes):
            raise InvalidSpecError("cavity photon number must be 0 or 1")
        n2 = math.fsum(abs(v) ** 2 for v in self.amplitudes.values())
        if abs(n2 - 1.0) > NORM_TOL:
            raise InvalidSpecError(f"cavity state norm^2 {n2} != 1")

    def photon_population(self) -> float:
        return math.fsum(
            abs(v) ** 2 for (_, photon), v in self.amplitudes.items() if photon == 1
        )


def cavity_with_atom(spin: Spin) -> CavityState:
    """Fresh cavity in the vacuum with a single atom inside."""
    return CavityState({((spin,), 0): 1.0 + 0j}, coupled_atom=0)


def admit_atom(state: CavityState, spin: Spin) -> CavityState:
    """A new atom (in a definite spin) enters the cavity and couples to it."""
    amps = {
        (spins + (spin,), photon): v for (spins, photon), v in state.amplitudes.items()
    }
    n_atoms = len(next(iter(amps))[0])
    return CavityState(amps, coupled_atom=n_atoms - 1)


def jc_exchange(state: CavityState, omega_t: float) -> CavityState:
    """Resonant single-photon exchange for a transit of pulse area omega_t.

    Rotation by omega_t/2 in each {|e,0>, |g,1>} pair of the coupled atom:
        |e,0> -> cos(omega_t/2)|e,0> + sin(omega_t/2)|g,1>
        |g,1> -> cos(omega_t/2)|g,1> - sin(omega_t/2)|e,0>
    |g,0> is invariant; a negative area means the coupling sign is inverted
    (entry at the opposite sign of the cavity mode function).
    """
    c = math.cos(0.5 * omega_t)
    s = math.sin(0.5 * omega_t)
    atom = state.coupled_atom
    out: dict[CavityKet, complex] = {}

    def add(k: CavityKet, v: complex) -> None:
        out[k] = out.get(k, 0j) + v

    for (spins, photon), v in state.amplitudes.items():
        spin = spins[atom]
        if spin is Spin.G and photon == 0:
            add((spins, 0), v)
        elif spin is Spin.E and photon == 0:
            add((spins, 0), c * v)
            flipped = spins[:atom] + (Spin.G,) + spins[atom + 1 :]
            add((flipped, 1), s * v)
        elif spin is Spin.G and photon == 1:
            add((spins, 1), c * v)
            flipped = spins[:atom] + (Spin.E,) + spins[atom + 1 :]
            add((flipped, 0), -s * v)
        else:
            raise InvalidSpecError("|e,1> is outside the single-excitation space")
    pruned = {k: v for k, v in out.items() if abs(v) >= PRUNE_TOL}
    return CavityState(pruned, coupled_atom=atom)


def release_cavity(state: CavityState, tol: float = NORM_TOL) -> PureState:
    """Drop the cavity after verifying it factored out as the vacuum."""
    residual = state.photon_population()
    if residual > tol:
        raise ResidualPhotonError(
            f"cavity photon population {residual:.3e} exceeds tolerance {tol:.0e}"
        )
    return PureState(
        {
            ket(spins, 0): v
            for (spins, photon), v in state.amplitudes.items()
            if photon == 0
        }
    )


def bell_preparation(omega_t1: float = math.pi / 2) -> tuple[PureState, float]:
    """Run the two-transit preparation; returns (atom state, photon residual).

    Atom 1 enters excited and transits with area ``omega_t1`` (pi/2 leaves the
    photon in an equal superposition); atom 2 enters in the ground state and
    transits with area pi at inverted coupling sign, absorbing the photon
    completely.  The inverted sign on the second transit is what produces the
    plus superposition; with equal signs the orthogonal Bell state appears.
    """
    state = cavity_with_atom(Spin.E)
    state = jc_exchange(state, omega_t1)
    state = admit_atom(state, Spin.G)
    state = jc_exchange(state, -math.pi)
    residual = state.photon_population()
    return release_cavity(state), residual


def prepare_bell(omega_t1: float = math.pi / 2) -> PureState:
    """Single-photon-exchange preparation of (|ge> + |eg>)/sqrt2."""
    return bell_preparation(omega_t1)[0]


class ChannelKind(Enum):
    BELL = "bell"
    GENERAL = "general"
    CAT = "cat"
    CLASSICAL_MIXTURE = "classical_mixture"


@dataclass(frozen=True)
class ChannelSpec:
    """Channel description.  Atom ordering: remote atoms first, probe last."""

    kind: ChannelKind
    a: complex = SQRT_HALF
    b: complex = SQRT_HALF
    atoms: int = 2

    def __post_init__(self) -> None:
        if self.kind is ChannelKind.GENERAL:
            n2 = abs(self.a) ** 2 + abs(self.b) ** 2
            if abs(n2 - 1.0) > NORM_TOL:
                raise InvalidSpecError(f"|a|^2 + |b|^2 = {n2}, expected 1")
        if self.kind is ChannelKind.CAT and self.atoms < 2:
            raise InvalidSpecError("cat channel needs at least 2 atoms")
        if self.kind is not ChannelKind.CAT and self.atoms != 2:
            raise InvalidSpecError(f"{self.kind.value} channel is two-atom only")

    @classmethod
    def bell(cls) -> "ChannelSpec":
        return cls(ChannelKind.BELL)

    @classmethod
    def general(cls, a: complex, b: complex) -> "ChannelSpec":
        return cls(ChannelKind.GENERAL, a=complex(a), b=complex(b))

    @classmethod
    def cat(cls, atoms: int) -> "ChannelSpec":
        return cls(ChannelKind.CAT, atoms=atoms)

    @classmethod
    def classical_mixture(cls) -> "ChannelSpec":
        return cls(ChannelKind.CLASSICAL_MIXTURE)

    @property
    def amplitude_sq(self) -> float:
        """|a|^2 of the branch whose probe starts in |g> (fringe prefactor)."""
        if self.kind is ChannelKind.GENERAL:
            return abs(self.a) ** 2
        return 0.5


def make_channel(spec: ChannelSpec) -> PureState | Ensemble:
    """Construct the shared channel state; probe atom last, momentum index 0.

    Bell           -> (|g e> + |e g>)/sqrt2
    General(a, b)  ->  a|g e> + b|e g>
    Cat(M)         -> (|g..g>|e> + |e..e>|g>)/sqrt2
    ClassicalMixture -> equal-weight ensemble of |g e> and |e g>
    """
    if spec.kind is ChannelKind.BELL:
        return PureState({ket("ge"): SQRT_HALF, ket("eg"): SQRT_HALF})
    if spec.kind is ChannelKind.GENERAL:
        return PureState({ket("ge"): spec.a, ket("eg"): spec.b})
    if spec.kind is ChannelKind.CAT:
        remotes = spec.atoms - 1
        return PureState(
            {
                ket("g" * remotes + "e"): SQRT_HALF,
                ket("e" * remotes + "g"): SQRT_HALF,
            }
        )
    return Ensemble(
        (
            (0.5, PureState({ket("ge"): 1.0 + 0j})),
            (0.5, PureState({ket("eg"): 1.0 + 0j})),
        )
    )
