"""Channel-amplitude optimization: readout entropy and the noise-ratio
extremum, both of which single out |a| = |b| = 1/sqrt(2).

The three readout outcomes of one transfer experiment are
P1 = |a|^2 (1 + cos dphi)/2 (selection at n=0 with remote |g>),
P2 = |b|^2 (1 - cos dphi)/2 (the complementary momentum port), and the
remaining selection-failure mass 1 - P1 - P2, so the distribution is
normalized and the Shannon entropy is well defined.  Averaged over a full
fringe the entropy is symmetric under a <-> b and peaks at |a| = 1/sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MultimodalError

GOLDEN_INV = (math.sqrt(5.0) - 1.0) / 2.0  # 0.618...

DEFAULT_FRINGE_GRID = 1024
_UNIMODAL_PRECHECK_POINTS = 33
_PLATEAU_TOL = 1e-12


@dataclass(frozen=True)
class OptimizationResult:
    a_star: float
    objective_value: float
    iterations: int
    method: str
    bracket: tuple[float, float] | None = None

    @property
    def b_star(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.a_star**2))


def _entropy_bits(probs: list[float]) -> float:
    acc = 0.0
    for p in probs:
        if p > 0.0:
            acc -= p * math.log2(p)
    return acc


def outcome_entropy(a_abs: float, delta_phi: float) -> float:
    """Shannon entropy (bits) of the three-outcome readout distribution."""
    if not 0.0 <= a_abs <= 1.0:
        raise ValueError("a_abs must lie in [0, 1]")
    a2 = a_abs * a_abs
    p1 = 0.5 * (1.0 + math.cos(delta_phi)) * a2
    p2 = 0.5 * (1.0 - math.cos(delta_phi)) * (1.0 - a2)
    p3 = max(0.0, 1.0 - p1 - p2)
    return _entropy_bits([p1, p2, p3])


def fringe_averaged_entropy(a_abs: float, grid_points: int = DEFAULT_FRINGE_GRID) -> float:
    """Mean outcome entropy over a uniform dphi grid on [0, 2pi)."""
    if grid_points < 1:
        raise ValueError("grid_points must be >= 1")
    step = 2.0 * math.pi / grid_points
    return math.fsum(
        outcome_entropy(a_abs, j * step) for j in range(grid_points)
    ) / grid_points


def _precheck_unimodal(f, lo: float, hi: float) -> None:
    """Coarse-grid guard: reject objectives that fall and then rise again."""
    xs = [lo + (hi - lo) * i / (_UNIMODAL_PRECHECK_POINTS - 1)
          for i in range(_UNIMODAL_PRECHECK_POINTS)]
    ys = [f(x) for x in xs]
    peak = max(range(len(ys)), key=ys.__getitem__)
    for i in range(1, peak + 1):
        if ys[i] < ys[i - 1] - _PLATEAU_TOL:
            raise MultimodalError(f"objective not unimodal near a={xs[i]:.4f}")
    for i in range(peak + 1, len(ys)):
        if ys[i] > ys[i - 1] + _PLATEAU_TOL:
            raise MultimodalError(f"objective not unimodal near a={xs[i]:.4f}")


def golden_section_max(f, lo: float, hi: float, tolerance: float) -> tuple[float, int]:
    """Golden-section search for the maximum of a unimodal f on [lo, hi].

    Returns (argmax estimate, number of interval reductions); the final
    bracket width is below ``tolerance``.
    """
    if tolerance <= 0.0:
        raise ValueError("tolerance must be positive")
    a, b = lo, hi
    c = b - GOLDEN_INV * (b - a)
    d = a + GOLDEN_INV * (b - a)
    fc, fd = f(c), f(d)
    iterations = 0
    while b - a > tolerance:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN_INV * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN_INV * (b - a)
            fd = f(d)
        iterations += 1
    return 0.5 * (a + b), iterations


def optimize_entropy(
    tolerance: float, grid_points: int = DEFAULT_FRINGE_GRID
) -> OptimizationResult:
    """Maximize the fringe-averaged entropy over |a| in [0, 1]."""
    if tolerance <= 0.0:
        raise ValueError("tolerance must be positive")

    def objective(a: float) -> float:
        return fringe_averaged_entropy(a, grid_points)

    _precheck_unimodal(objective, 0.0, 1.0)
    a_star, iterations = golden_section_max(objective, 0.0, 1.0, tolerance)
    return OptimizationResult(
        a_star=a_star,
        objective_value=objective(a_star),
        iterations=iterations,
        method="golden_section",
        bracket=(max(0.0, a_star - tolerance), min(1.0, a_star + tolerance)),
    )


def png_ratio(a_abs: float) -> float:
    """Channel/no-channel phase-noise ratio sqrt(|a| |b|)."""
    if not 0.0 <= a_abs <= 1.0:
        raise ValueError("a_abs must lie in [0, 1]")
    return math.sqrt(a_abs * math.sqrt(1.0 - a_abs * a_abs))


def png_ratio_extremum() -> OptimizationResult:
    """Extremum of the noise ratio sqrt(|a||b|) under |a|^2 + |b|^2 = 1.

    Analytic: the ratio is maximal at |a| = |b| = 1/sqrt(2) with value
    2^(-1/2) and vanishes at the boundary.  Note the extremum maximizes the
    ratio; smaller values of sqrt(|a||b|) suppress phase noise more, so an
    unbalanced channel trades noise suppression against transfer entropy.
    """
    a_star = math.sqrt(0.5)
    return OptimizationResult(
        a_star=a_star,
        objective_value=math.sqrt(0.5),
        iterations=0,
        method="analytic",
        bracket=None,
    )
