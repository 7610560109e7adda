"""Shot-noise and phase-noise figures, closed form and Monte Carlo.

Closed forms: the per-measurement shot-noise phase uncertainty is 1/sqrt(N)
directly and sqrt(2/N) through the channel (their ratio is exactly sqrt(2));
the phase-noise contribution is c*sin(<dphi>/2) directly and 1/sqrt(2) of
that through the Bell channel, with the general channel a|ge>+b|eg> scaling
the ratio as sqrt(|a||b|).

Monte Carlo: counts are binomial draws converted to phase estimates by local
linearization of the fringe at <dphi>.  The channel shot-noise default is the
atom-loss model (half the atoms survive velocity selection, the surviving
counts follow the full-amplitude fringe, the inversion uses the
half-amplitude marginal fringe), which reproduces sqrt(2/N) at every
operating point.  Naive propagation through the quarter fringe alone gives
sqrt((3 - cos dphi)/(1 - cos dphi))/sqrt(N) instead, which is not a constant
ratio; it ships behind the "naive" model flag for comparison.

Determinism: run i of stream s draws from
Generator(PCG64(SeedSequence(seed, spawn_key=(s, i)))), so serial and
parallel execution produce identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedError
from .util import thread_map

SHOT_MODELS = ("atom_loss", "naive")

# stream ids for the per-run seed-splitting rule
_STREAM_SHOT_DIRECT = 0
_STREAM_SHOT_CHANNEL = 1
_STREAM_PHASE_DIRECT = 2
_STREAM_PHASE_CHANNEL = 3

#: minimum |sin <dphi>| for the count-to-phase inversion to be well posed
MIN_FRINGE_SLOPE = 0.1


@dataclass(frozen=True)
class NoiseParams:
    """Trial count N, noise constant c, operating phase, RNG seed, MC runs."""

    n_atoms: int
    c: float
    delta_phi_mean: float
    seed: int
    n_runs: int
    amplitude_a: float | None = None  # general-channel |a|; None = Bell
    shot_model: str = "atom_loss"
    weight: float = 100.0  # phase-vs-shot dominance in the combined figure

    def __post_init__(self) -> None:
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be >= 1")
        if self.c < 0:
            raise ValueError("c must be non-negative")
        if self.n_runs < 2:
            raise ValueError("n_runs must be >= 2 for a variance estimate")
        if self.shot_model not in SHOT_MODELS:
            raise ValueError(f"shot_model must be one of {SHOT_MODELS}")
        if self.amplitude_a is not None and not 0.0 <= self.amplitude_a <= 1.0:
            raise ValueError("amplitude_a must lie in [0, 1]")
        if self.weight < 0:
            raise ValueError("weight must be non-negative")

    @property
    def coherence_scale(self) -> float:
        """|a||b| of the channel; 1/2 for the Bell channel."""
        a = math.sqrt(0.5) if self.amplitude_a is None else self.amplitude_a
        return a * math.sqrt(max(0.0, 1.0 - a * a))


@dataclass(frozen=True)
class NoiseReport:
    """Closed-form and Monte Carlo noise figures with their ratios."""

    shot_no_channel: float
    shot_with_channel: float
    shot_ratio: float
    phase_no_channel: float
    phase_with_channel: float
    phase_ratio: float
    mc_shot_no_channel: float
    mc_shot_no_channel_se: float
    mc_shot_with_channel: float
    mc_shot_with_channel_se: float
    mc_phase_no_channel: float
    mc_phase_no_channel_se: float
    mc_phase_with_channel: float
    mc_phase_with_channel_se: float
    mc_phase_ratio: float | None  # None when noiseless (c = 0)
    mc_phase_ratio_se: float | None
    combined_ratio: float
    weight: float
    shot_model: str
    seed: int


def shot_noise_closed_form(n_atoms: int, with_channel: bool) -> float:
    """1/sqrt(N) directly, sqrt(2/N) through the channel."""
    if n_atoms < 1:
        raise ValueError("n_atoms must be >= 1")
    return math.sqrt(2.0 / n_atoms) if with_channel else 1.0 / math.sqrt(n_atoms)


def phase_noise_closed_form(
    c: float,
    mean_delta_phi: float,
    with_channel: bool,
    amplitude_a: float | None = None,
) -> float:
    """c*sin(<dphi>/2), scaled by sqrt(|a||b|) when a channel is present."""
    if c < 0:
        raise ValueError("c must be non-negative")
    base = c * math.sin(0.5 * mean_delta_phi)
    if not with_channel:
        return base
    a = math.sqrt(0.5) if amplitude_a is None else amplitude_a
    b = math.sqrt(max(0.0, 1.0 - a * a))
    return base * math.sqrt(a * b)


def _run_rng(seed: int, stream: int, run: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream, run)))
    )


def _std_with_se(samples: np.ndarray) -> tuple[float, float]:
    """Sample standard deviation and its standard error (normal kurtosis)."""
    n = samples.size
    est = float(np.std(samples, ddof=1))
    return est, est / math.sqrt(2.0 * (n - 1))


def mc_shot_noise(
    params: NoiseParams, with_channel: bool, model: str | None = None
) -> tuple[float, float]:
    """Monte Carlo phase uncertainty from binomial count fluctuations.

    Each run draws one count and converts it to a phase estimate through the
    fringe slope at the operating point; the estimate is the sample standard
    deviation of those phases across runs, with its standard error.
    """
    model = params.shot_model if model is None else model
    if model not in SHOT_MODELS:
        raise ValueError(f"shot model must be one of {SHOT_MODELS}")
    x0 = params.delta_phi_mean
    sin0 = math.sin(x0)
    if abs(sin0) <= MIN_FRINGE_SLOPE:
        raise IllConditionedError(
            f"|sin(<dphi>)| = {abs(sin0):.3f} <= {MIN_FRINGE_SLOPE}; "
            "count-to-phase inversion is singular near a fringe extremum"
        )
    n = params.n_atoms
    cos0 = math.cos(x0)
    if not with_channel:
        trials, p, slope = n, 0.5 * (1.0 + cos0), -0.5 * n * sin0
        stream = _STREAM_SHOT_DIRECT
    elif model == "atom_loss":
        # half the atoms survive selection; inversion through the marginal
        # quarter-amplitude fringe N(1+cos)/4
        trials, p, slope = n // 2, 0.5 * (1.0 + cos0), -0.25 * n * sin0
        stream = _STREAM_SHOT_CHANNEL
    else:
        trials, p, slope = n, 0.25 * (1.0 + cos0), -0.25 * n * sin0
        stream = _STREAM_SHOT_CHANNEL
    mean_count = trials * p
    inv_slope = 1.0 / slope

    def one_run(i: int) -> float:
        count = _run_rng(params.seed, stream, i).binomial(trials, p)
        return x0 + (count - mean_count) * inv_slope

    phases = np.array(thread_map(one_run, range(params.n_runs)))
    return _std_with_se(phases)


def mc_phase_noise(
    params: NoiseParams, with_channel: bool, amplitude_a: float | None = None
) -> tuple[float, float]:
    """Monte Carlo phase-noise contribution under the fluorescence model.

    Each run draws one phase sample with variance c^2 (1 + cos<dphi>)/2,
    scaled by the channel coherence |a||b| when a channel is present; the
    estimate is the sample standard deviation across runs.
    """
    x0 = params.delta_phi_mean
    if with_channel:
        if amplitude_a is None:
            scale = params.coherence_scale
        else:
            scale = amplitude_a * math.sqrt(max(0.0, 1.0 - amplitude_a * amplitude_a))
        stream = _STREAM_PHASE_CHANNEL
    else:
        scale = 1.0
        stream = _STREAM_PHASE_DIRECT
    variance = scale * params.c**2 * 0.5 * (1.0 + math.cos(x0))
    sigma = math.sqrt(max(0.0, variance))
    if sigma == 0.0:
        return 0.0, 0.0

    def one_run(i: int) -> float:
        return x0 + _run_rng(params.seed, stream, i).normal(0.0, sigma)

    samples = np.array(thread_map(one_run, range(params.n_runs)))
    return _std_with_se(samples)


def combined_noise(weight: float, phase: float, shot: float) -> float:
    """Quadrature combination sqrt((w*phase)^2 + shot^2)."""
    return math.hypot(weight * phase, shot)


def snr_report(params: NoiseParams) -> NoiseReport:
    """All closed-form figures plus the Monte Carlo cross-checks."""
    shot_nc = shot_noise_closed_form(params.n_atoms, with_channel=False)
    shot_ch = shot_noise_closed_form(params.n_atoms, with_channel=True)
    phase_nc = phase_noise_closed_form(params.c, params.delta_phi_mean, False)
    phase_ch = phase_noise_closed_form(
        params.c, params.delta_phi_mean, True, params.amplitude_a
    )

    mc_shot_nc, mc_shot_nc_se = mc_shot_noise(params, with_channel=False)
    mc_shot_ch, mc_shot_ch_se = mc_shot_noise(params, with_channel=True)
    mc_ph_nc, mc_ph_nc_se = mc_phase_noise(params, with_channel=False)
    mc_ph_ch, mc_ph_ch_se = mc_phase_noise(params, with_channel=True)
    if mc_ph_nc > 0.0 and mc_ph_ch > 0.0:
        ratio = mc_ph_ch / mc_ph_nc
        ratio_se = ratio * math.hypot(mc_ph_ch_se / mc_ph_ch, mc_ph_nc_se / mc_ph_nc)
    else:  # noiseless (c = 0): the ratio is undefined
        ratio = None
        ratio_se = None

    if params.amplitude_a is None:
        phase_ratio = math.sqrt(0.5)
    else:
        a = params.amplitude_a
        phase_ratio = math.sqrt(a * math.sqrt(max(0.0, 1.0 - a * a)))
    return NoiseReport(
        shot_no_channel=shot_nc,
        shot_with_channel=shot_ch,
        shot_ratio=math.sqrt(2.0),
        phase_no_channel=phase_nc,
        phase_with_channel=phase_ch,
        phase_ratio=phase_ratio,
        mc_shot_no_channel=mc_shot_nc,
        mc_shot_no_channel_se=mc_shot_nc_se,
        mc_shot_with_channel=mc_shot_ch,
        mc_shot_with_channel_se=mc_shot_ch_se,
        mc_phase_no_channel=mc_ph_nc,
        mc_phase_no_channel_se=mc_ph_nc_se,
        mc_phase_with_channel=mc_ph_ch,
        mc_phase_with_channel_se=mc_ph_ch_se,
        mc_phase_ratio=ratio,
        mc_phase_ratio_se=ratio_se,
        combined_ratio=combined_noise(params.weight, phase_ch, shot_ch)
        / combined_noise(params.weight, phase_nc, shot_nc),
        weight=params.weight,
        shot_model=params.shot_model,
        seed=params.seed,
    )
