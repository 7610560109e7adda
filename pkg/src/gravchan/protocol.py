"""End-to-end transfer of the gravitational phase through the channel.

The probe (last atom) traverses the interferometer, velocity selection
projects its momentum back onto index 0, and a remote atom's spin is read
out.  Joint probabilities P(selection and spin) carry the fringe; the
selection-conditioned spin distribution is flat for the Bell channel and is
exposed separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .channel import ChannelSpec, make_channel
from .errors import PhaseOutOfRangeError
from .interferometer import (
    InterferometerParams,
    apply_composite,
    run_pulse_sequence,
    total_phase,
)
from .states import Ensemble, PureState, Spin, ket, measure_spin, project
from .util import thread_map

#: tolerance for clamping an observed probability onto the fringe range
READOUT_CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class TransferOutcome:
    """Joint outcome probabilities of one transfer experiment.

    p_select is the velocity-selection success probability; p_joint_g and
    p_joint_e are joint with selection and add up to it.  p_closed_form is
    the reference value |a|^2 (1 + cos dphi) / 2 for the measured remote atom
    ending in |g>.
    """

    p_select: float
    p_joint_g: float
    p_joint_e: float
    p_closed_form: float
    delta_phi_used: float

    @property
    def p_conditional_g(self) -> float:
        """P(remote = g | selection); nan at a dark fringe (p_select = 0)."""
        if self.p_select <= 0.0:
            return math.nan
        return self.p_joint_g / self.p_select

    @property
    def p_conditional_e(self) -> float:
        if self.p_select <= 0.0:
            return math.nan
        return self.p_joint_e / self.p_select


def _transfer_pure(
    state: PureState,
    params: InterferometerParams,
    remote_atom: int,
    delta_phi: float | None,
) -> tuple[float, float, float]:
    """(p_select, p_joint_g, p_joint_e) for one pure channel state."""
    evolved = apply_composite(state, params, delta_phi)
    p_select, selected = project(evolved, lambda k: k.momentum == 0)
    if selected is None:
        return 0.0, 0.0, 0.0
    probs = measure_spin(selected, remote_atom)
    return p_select, p_select * probs[Spin.G], p_select * probs[Spin.E]


def run_transfer(
    spec: ChannelSpec,
    params: InterferometerParams,
    remote_atom: int = 0,
    delta_phi_override: float | None = None,
) -> TransferOutcome:
    """Full simulation: channel -> interferometer -> velocity selection ->
    remote spin readout.  Ensemble channels average member outcomes."""
    channel = make_channel(spec)
    probe = (channel.members[0][1] if isinstance(channel, Ensemble) else channel).num_atoms - 1
    if not 0 <= remote_atom < probe + 1:
        raise IndexError(f"remote atom {remote_atom} out of range")
    if remote_atom == probe:
        raise IndexError("remote atom must not be the probe (last atom)")

    if isinstance(channel, Ensemble):
        parts = [
            (w, _transfer_pure(s, params, remote_atom, delta_phi_override))
            for w, s in channel.members
        ]
        p_select = math.fsum(w * p[0] for w, p in parts)
        p_g = math.fsum(w * p[1] for w, p in parts)
        p_e = math.fsum(w * p[2] for w, p in parts)
    else:
        p_select, p_g, p_e = _transfer_pure(channel, params, remote_atom, delta_phi_override)

    dphi = _used_delta_phi(params, delta_phi_override)
    closed = spec.amplitude_sq * 0.5 * (1.0 + math.cos(dphi))
    return TransferOutcome(p_select, p_g, p_e, closed, dphi)


def direct_measurement(
    params: InterferometerParams, delta_phi_override: float | None = None
) -> float:
    """Ground-state probability of a bare |g,0> probe after the full
    pulse-by-pulse sequence (no channel)."""
    psi = PureState({ket("g", 0): 1.0 + 0j})
    out = run_pulse_sequence(psi, params, delta_phi_override)
    return measure_spin(out, 0)[Spin.G]


def _direct_outcome(params: InterferometerParams, dphi: float) -> TransferOutcome:
    psi = PureState({ket("g", 0): 1.0 + 0j})
    out = run_pulse_sequence(psi, params, dphi)
    p_select, selected = project(out, lambda k: k.momentum == 0)
    p_g = p_select * measure_spin(selected, 0)[Spin.G] if selected is not None else 0.0
    closed = 0.5 * (1.0 + math.cos(dphi))
    return TransferOutcome(p_select, p_g, p_select - p_g, closed, dphi)


def fringe_scan(
    spec: ChannelSpec | None,
    params: InterferometerParams,
    delta_phi_grid: Sequence[float],
    remote_atom: int = 0,
) -> list[tuple[float, TransferOutcome]]:
    """One transfer per grid point (``spec=None`` runs the channel-free probe).

    Results are ordered by the input grid regardless of evaluation order.
    """
    grid = [float(x) for x in delta_phi_grid]
    if not grid or any(not math.isfinite(x) for x in grid):
        raise ValueError("delta_phi grid must be non-empty and finite")

    if spec is None:
        outcomes = thread_map(lambda d: _direct_outcome(params, d), grid)
    else:
        outcomes = thread_map(
            lambda d: run_transfer(spec, params, remote_atom, delta_phi_override=d), grid
        )
    return list(zip(grid, outcomes))


def estimate_phase(p_observed: float, amplitude_sq: float) -> float:
    """Invert the fringe P = |a|^2 (1 + cos dphi) / 2 for dphi in [0, pi].

    Only the principal branch is returned; multi-fringe unwrapping is the
    caller's responsibility.  Values outside [0, |a|^2] by more than the
    clamp tolerance raise PhaseOutOfRangeError.
    """
    if amplitude_sq <= READOUT_CLAMP_TOL:
        raise PhaseOutOfRangeError(f"fringe amplitude {amplitude_sq} too small to invert")
    if p_observed > amplitude_sq + READOUT_CLAMP_TOL or p_observed < -READOUT_CLAMP_TOL:
        raise PhaseOutOfRangeError(
            f"observed probability {p_observed} outside [0, {amplitude_sq}]"
        )
    clamped = min(max(p_observed, 0.0), amplitude_sq)
    return math.acos(2.0 * clamped / amplitude_sq - 1.0)


def _used_delta_phi(params: InterferometerParams, override: float | None) -> float:
    if override is not None:
        return float(override)
    return total_phase(params.timing, params.gravity, params.gradient_correction)
