"""Mach-Zehnder pulse sequence and its closed-form composite map.

The probe atom sees a pi/2 - pi - pi/2 Raman sequence.  Two equivalent
descriptions are provided and must agree:

* ``composite_coefficients`` / ``apply_composite``: the closed-form 2x2
  transfer map (a1, a2, b1, b2) acting on the probe's {|g,n>, |e,n+1>} pairs,
* ``run_pulse_sequence``: an explicit pulse-by-pulse simulation built from
  per-pulse unitaries plus a calibrated free-flight phase.

The accumulated interferometric phase dphi = k*g*T^2 (optionally with the
(7/12)*gamma*T^2 gradient correction) carries the gravitational signal.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .states import BasisOperator, BasisVector, PureState, Spin, apply

HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class GravityModel:
    """Local gravity g0 [m/s^2] and gradient gamma [s^-2].

    gamma is stored in s^-2 so that gamma*T^2 is dimensionless; a gradient
    quoted as x [g/m] (the common survey convention) converts as x * g0.
    """

    g0: float = 9.8
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if self.g0 < 0:
            raise ValueError("g0 must be non-negative")
        if not math.isfinite(self.gamma):
            raise ValueError("gamma must be finite")


@dataclass(frozen=True)
class PulseTiming:
    """Interrogation time T [s] between pulses and effective wavevector k [1/m]."""

    T: float
    k: float

    def __post_init__(self) -> None:
        if self.T < 0:
            raise ValueError("T must be non-negative")
        if self.k <= 0:
            raise ValueError("k must be positive")


@dataclass(frozen=True)
class LaserPhases:
    """Initial laser phases of the pi/2, pi, pi/2 pulses, in radians.

    Kept unreduced (no mod 2pi); every consumer uses them inside exponentials.
    """

    phi1: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0

    def light_combination(self) -> float:
        """Laser-phase contribution phi1 - 2*phi2 + phi3 to the closed loop."""
        return self.phi1 - 2.0 * self.phi2 + self.phi3


@dataclass(frozen=True)
class InterferometerParams:
    timing: PulseTiming
    gravity: GravityModel
    phases: LaserPhases = LaserPhases()
    gradient_correction: bool = False


@dataclass(frozen=True)
class CompositeCoefficients:
    """Entries of the unitary probe transfer matrix [[a1, b1], [a2, b2]]."""

    a1: complex
    a2: complex
    b1: complex
    b2: complex


def total_phase(
    timing: PulseTiming, gravity: GravityModel, gradient_correction: bool = False
) -> float:
    """Accumulated interferometric phase k*g0*T^2, with the optional
    (1 + (7/12)*gamma*T^2) gradient factor.  O(T^3) terms are not modeled."""
    base = timing.k * gravity.g0 * timing.T**2
    if not gradient_correction:
        return base
    return (1.0 + (7.0 / 12.0) * gravity.gamma * timing.T**2) * base


def ground_probability(delta_phi: float) -> float:
    """Direct-readout ground-state fringe (1 + cos(dphi)) / 2."""
    return 0.5 * (1.0 + math.cos(delta_phi))


def composite_coefficients(phases: LaserPhases, delta_phi: float) -> CompositeCoefficients:
    """Closed-form composite map of the full pulse sequence.

    a1 = -1/2 e^{i(phi1-phi2)} (1 + e^{-i dphi})
    a2 = +i/2 e^{i(phi1-phi2+phi3)} (1 - e^{-i dphi})
    b1 = +i/2 e^{i(phi2-phi1-phi3)} (1 - e^{+i dphi})
    b2 = -1/2 e^{i(phi2-phi1)} (1 + e^{+i dphi})
    """
    p1, p2, p3 = phases.phi1, phases.phi2, phases.phi3
    em = cmath.exp(-1j * delta_phi)
    ep = cmath.exp(1j * delta_phi)
    a1 = -0.5 * cmath.exp(1j * (p1 - p2)) * (1.0 + em)
    a2 = 0.5j * cmath.exp(1j * (p1 - p2 + p3)) * (1.0 - em)
    b1 = 0.5j * cmath.exp(1j * (p2 - p1 - p3)) * (1.0 - ep)
    b2 = -0.5 * cmath.exp(1j * (p2 - p1)) * (1.0 + ep)
    return CompositeCoefficients(a1, a2, b1, b2)


def composite_operator(coeff: CompositeCoefficients) -> BasisOperator:
    """Probe-atom operator |g,n> -> a1|g,n> + a2|e,n+1>,
    |e,n> -> b1|g,n-1> + b2|e,n>."""

    def rules(k: BasisVector):
        n = k.momentum
        if k.probe_spin is Spin.G:
            return (
                (coeff.a1, k.with_probe(Spin.G, n)),
                (coeff.a2, k.with_probe(Spin.E, n + 1)),
            )
        return (
            (coeff.b1, k.with_probe(Spin.G, n - 1)),
            (coeff.b2, k.with_probe(Spin.E, n)),
        )

    return BasisOperator(rules, unitary=True, name="composite")


def apply_composite(
    state: PureState,
    params: InterferometerParams,
    delta_phi_override: float | None = None,
) -> PureState:
    """Send the probe atom through the closed-form interferometer map."""
    dphi = _resolve_delta_phi(params, delta_phi_override)
    return apply(composite_operator(composite_coefficients(params.phases, dphi)), state)


class PulseKind(Enum):
    BEAMSPLITTER = "pi/2"
    MIRROR = "pi"


def pulse(kind: PulseKind, phase: float) -> BasisOperator:
    """Resonant Rabi rotation on the probe's {|g,n>, |e,n+1>} pairs.

    pi/2: |g,n>   -> (|g,n> - i e^{+i phase} |e,n+1>) / sqrt2
          |e,n+1> -> (|e,n+1> - i e^{-i phase} |g,n>) / sqrt2
    pi:   |g,n>   -> -i e^{+i phase} |e,n+1>
          |e,n+1> -> -i e^{-i phase} |g,n>
    """
    up = -1j * cmath.exp(1j * phase)
    down = -1j * cmath.exp(-1j * phase)

    if kind is PulseKind.BEAMSPLITTER:

        def rules(k: BasisVector):
            n = k.momentum
            if k.probe_spin is Spin.G:
                return ((HALF, k), (HALF * up, k.with_probe(Spin.E, n + 1)))
            return ((HALF * down, k.with_probe(Spin.G, n - 1)), (HALF, k))

    else:

        def rules(k: BasisVector):
            n = k.momentum
            if k.probe_spin is Spin.G:
                return ((up, k.with_probe(Spin.E, n + 1)),)
            return ((down, k.with_probe(Spin.G, n - 1)),)

    return BasisOperator(rules, unitary=True, name=f"pulse[{kind.value},phase={phase:g}]")


def _probe_spin_phase(phase_g: float, phase_e: float) -> BasisOperator:
    """Diagonal phase e^{i phase_g} / e^{i phase_e} on the probe spin."""
    fg = cmath.exp(1j * phase_g)
    fe = cmath.exp(1j * phase_e)

    def rules(k: BasisVector):
        return ((fg if k.probe_spin is Spin.G else fe, k),)

    return BasisOperator(rules, unitary=True, name="probe-spin-phase")


def run_pulse_sequence(
    state: PureState,
    params: InterferometerParams,
    delta_phi_override: float | None = None,
) -> PureState:
    """Pulse-by-pulse simulation of pi/2(phi1), free flight, pi(phi2), free
    flight, pi/2(phi3).

    The free flight imprints the gravitational path phase
    theta = dphi - (phi1 - 2*phi2 + phi3) on the excited (upper) arm of the
    first segment; the matching input phase reference e^{-i theta} on the
    ground component fixes the overall spin-phase gauge so the result equals
    ``apply_composite`` amplitude-for-amplitude (one shared global phase).
    """
    dphi = _resolve_delta_phi(params, delta_phi_override)
    theta = dphi - params.phases.light_combination()
    out = apply(_probe_spin_phase(-theta, 0.0), state)
    out = apply(pulse(PulseKind.BEAMSPLITTER, params.phases.phi1), out)
    out = apply(_probe_spin_phase(0.0, theta), out)
    out = apply(pulse(PulseKind.MIRROR, params.phases.phi2), out)
    out = apply(pulse(PulseKind.BEAMSPLITTER, params.phases.phi3), out)
    return out


def _resolve_delta_phi(
    params: InterferometerParams, delta_phi_override: float | None
) -> float:
    if delta_phi_override is not None:
        return delta_phi_override
    return total_phase(params.timing, params.gravity, params.gradient_correction)
