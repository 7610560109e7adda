"""Run configuration schema shared by the REST service and the CLI.

One JSON document describes one run.  Unknown keys are rejected everywhere;
validation happens before any computation.  The same models double as the
service request bodies, so a config file can be POSTed verbatim.
"""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .channel import ChannelSpec
from .interferometer import (
    GravityModel,
    InterferometerParams,
    LaserPhases,
    PulseTiming,
)
from .noise import NoiseParams

SCHEMA_VERSION = "1"


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ChannelConfig(StrictModel):
    """Channel selection: bell | general | cat | classical_mixture.

    ``general`` needs real amplitudes a, b with a^2 + b^2 = 1 (only the
    magnitudes matter anywhere downstream); ``cat`` needs the total atom
    count (remote atoms plus the probe).
    """

    variant: Literal["bell", "general", "cat", "classical_mixture"] = "bell"
    a: float | None = None
    b: float | None = None
    atoms: int | None = None

    @model_validator(mode="after")
    def _check(self) -> "ChannelConfig":
        if self.variant == "general":
            if self.a is None or self.b is None:
                raise ValueError("general channel requires both a and b")
            norm = self.a**2 + self.b**2
            if abs(norm - 1.0) > 1e-12:
                raise ValueError(f"a^2 + b^2 = {norm}, expected 1")
        elif self.a is not None or self.b is not None:
            raise ValueError(f"a/b only apply to the general channel, not {self.variant}")
        if self.variant == "cat":
            if self.atoms is None or self.atoms < 2:
                raise ValueError("cat channel requires atoms >= 2")
        elif self.atoms is not None:
            raise ValueError("atoms only applies to the cat channel")
        return self

    def to_spec(self) -> ChannelSpec:
        if self.variant == "bell":
            return ChannelSpec.bell()
        if self.variant == "general":
            return ChannelSpec.general(self.a, self.b)
        if self.variant == "cat":
            return ChannelSpec.cat(self.atoms)
        return ChannelSpec.classical_mixture()


class GravityConfig(StrictModel):
    """g0 in m/s^2; the gradient either directly in s^-2 (``gamma``) or in
    the survey convention g per meter (``gamma_g_per_m``, converted as
    gamma = gamma_g_per_m * g0)."""

    g0: float = Field(default=9.8, ge=0.0)
    gamma: float | None = None
    gamma_g_per_m: float | None = None

    @model_validator(mode="after")
    def _single_gradient(self) -> "GravityConfig":
        if self.gamma is not None and self.gamma_g_per_m is not None:
            raise ValueError("give at most one of gamma and gamma_g_per_m")
        return self

    def to_model(self) -> GravityModel:
        if self.gamma is not None:
            gamma = self.gamma
        elif self.gamma_g_per_m is not None:
            gamma = self.gamma_g_per_m * self.g0
        else:
            gamma = 0.0
        return GravityModel(g0=self.g0, gamma=gamma)


class TimingConfig(StrictModel):
    T: float = Field(default=0.1, ge=0.0, description="interrogation time, s")
    k: float = Field(default=1.0e7, gt=0.0, description="effective wavevector, 1/m")


class PhasesConfig(StrictModel):
    phi1: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0


class InterferometerConfig(StrictModel):
    timing: TimingConfig = TimingConfig()
    gravity: GravityConfig = GravityConfig()
    phases: PhasesConfig = PhasesConfig()
    gradient_correction: bool = False

    def to_params(self) -> InterferometerParams:
        return InterferometerParams(
            timing=PulseTiming(T=self.timing.T, k=self.timing.k),
            gravity=self.gravity.to_model(),
            phases=LaserPhases(self.phases.phi1, self.phases.phi2, self.phases.phi3),
            gradient_correction=self.gradient_correction,
        )


class GridConfig(StrictModel):
    """Either an explicit list of dphi values or start/stop/num (inclusive
    linspace)."""

    values: list[float] | None = None
    start: float | None = None
    stop: float | None = None
    num: int | None = None

    @model_validator(mode="after")
    def _check(self) -> "GridConfig":
        ranged = (self.start, self.stop, self.num)
        if self.values is not None:
            if any(v is not None for v in ranged):
                raise ValueError("give either values or start/stop/num, not both")
            if not self.values:
                raise ValueError("grid values must be non-empty")
            if any(not math.isfinite(v) for v in self.values):
                raise ValueError("grid values must be finite")
        else:
            if any(v is None for v in ranged):
                raise ValueError("grid needs values or all of start/stop/num")
            if self.num < 1:
                raise ValueError("grid num must be >= 1")
            if not (math.isfinite(self.start) and math.isfinite(self.stop)):
                raise ValueError("grid bounds must be finite")
        return self

    def to_values(self) -> list[float]:
        if self.values is not None:
            return [float(v) for v in self.values]
        if self.num == 1:
            return [float(self.start)]
        step = (self.stop - self.start) / (self.num - 1)
        return [self.start + i * step for i in range(self.num)]


class FringeConfig(StrictModel):
    """Config for ``fringe``: channel + interferometer + dphi grid.

    Without a grid the single operating point k*g0*T^2 from the
    interferometer section is scanned.
    """

    channel: ChannelConfig = ChannelConfig()
    interferometer: InterferometerConfig = InterferometerConfig()
    grid: GridConfig | None = None
    remote_atom: int = Field(default=0, ge=0)
    out: str | None = None
    summary_out: str | None = None


class NoiseConfig(StrictModel):
    """Config for ``noise``: closed-form and Monte Carlo comparison."""

    n_atoms: int = Field(default=1_000_000, ge=1)
    c: float = Field(default=1.0e-3, ge=0.0)
    mean_delta_phi: float = math.pi / 2
    seed: int = 42
    n_runs: int = Field(default=4096, ge=2)
    amplitude_a: float | None = Field(default=None, ge=0.0, le=1.0)
    shot_model: Literal["atom_loss", "naive"] = "atom_loss"
    weight: float = Field(default=100.0, ge=0.0)
    out: str | None = None
    summary_out: str | None = None

    def to_params(self) -> NoiseParams:
        return NoiseParams(
            n_atoms=self.n_atoms,
            c=self.c,
            delta_phi_mean=self.mean_delta_phi,
            seed=self.seed,
            n_runs=self.n_runs,
            amplitude_a=self.amplitude_a,
            shot_model=self.shot_model,
            weight=self.weight,
        )


class OptimizeConfig(StrictModel):
    """Config for ``optimize``: entropy search tolerance and fringe grid."""

    tolerance: float = Field(default=1.0e-4, gt=0.0)
    grid_points: int = Field(default=1024, ge=1)
    summary_out: str | None = None


class PrepareConfig(StrictModel):
    """Config for ``prepare``: which channel state to build and verify."""

    channel: ChannelConfig = ChannelConfig()
    summary_out: str | None = None
