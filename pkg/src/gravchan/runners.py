"""Command implementations shared by the REST service and the CLI.

Each runner takes a validated config and returns deterministic payloads:
CSV text (stable column order, 17 significant digits) and a JSON-ready
summary dict that echoes the exact config used.
"""

from __future__ import annotations

import math
from dataclasses import asdict

from .channel import ChannelKind, bell_preparation, make_channel
from .config import (
    SCHEMA_VERSION,
    FringeConfig,
    NoiseConfig,
    OptimizeConfig,
    PrepareConfig,
)
from .interferometer import total_phase
from .noise import snr_report
from .optimize import optimize_entropy, png_ratio_extremum
from .protocol import fringe_scan
from .states import Ensemble, fidelity
from .util import fmt17

FRINGE_COLUMNS = (
    "delta_phi_rad",
    "p_direct",
    "p_channel_joint_g",
    "p_channel_closed_form",
    "abs_error",
)

NOISE_COLUMNS = ("metric", "closed_form", "mc_estimate", "mc_stderr")


def _csv(columns: tuple[str, ...], rows: list[list]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join("" if v is None else fmt17(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _base_summary(command: str, config) -> dict:
    return {
        "command": command,
        "schema_version": SCHEMA_VERSION,
        "config": config.model_dump(mode="json"),
    }


def run_fringe(config: FringeConfig) -> tuple[str, dict]:
    """Fringe scan CSV: direct readout vs channel transfer vs closed form."""
    params = config.interferometer.to_params()
    if config.grid is not None:
        grid = config.grid.to_values()
    else:
        grid = [total_phase(params.timing, params.gravity, params.gradient_correction)]
    spec = config.channel.to_spec()

    direct = fringe_scan(None, params, grid)
    channel = fringe_scan(spec, params, grid, remote_atom=config.remote_atom)

    rows: list[list] = []
    max_err = 0.0
    for (dphi, d), (_, ch) in zip(direct, channel):
        err = abs(ch.p_joint_g - ch.p_closed_form)
        max_err = max(max_err, err)
        rows.append([dphi, d.p_joint_g, ch.p_joint_g, ch.p_closed_form, err])

    summary = _base_summary("fringe", config)
    summary.update(
        {
            "columns": list(FRINGE_COLUMNS),
            "n_points": len(grid),
            "max_abs_error": max_err,
        }
    )
    return _csv(FRINGE_COLUMNS, rows), summary


def run_noise(config: NoiseConfig) -> tuple[str, dict]:
    """Noise report CSV plus the full report in the summary."""
    report = snr_report(config.to_params())
    rows = [
        ["shot_no_channel", report.shot_no_channel, report.mc_shot_no_channel,
         report.mc_shot_no_channel_se],
        ["shot_with_channel", report.shot_with_channel, report.mc_shot_with_channel,
         report.mc_shot_with_channel_se],
        ["shot_ratio", report.shot_ratio, None, None],
        ["phase_no_channel", report.phase_no_channel, report.mc_phase_no_channel,
         report.mc_phase_no_channel_se],
        ["phase_with_channel", report.phase_with_channel, report.mc_phase_with_channel,
         report.mc_phase_with_channel_se],
        ["phase_ratio", report.phase_ratio, report.mc_phase_ratio, report.mc_phase_ratio_se],
        ["combined_ratio", report.combined_ratio, None, None],
    ]
    summary = _base_summary("noise", config)
    summary.update(
        {
            "report": asdict(report),
            "shot_ratio": report.shot_ratio,
            "phase_ratio": report.phase_ratio,
            "combined_ratio": report.combined_ratio,
            "channel_improves_combined": report.combined_ratio < 1.0,
            "seed": report.seed,
        }
    )
    return _csv(NOISE_COLUMNS, rows), summary


def run_optimize(config: OptimizeConfig) -> dict:
    """Both channel-amplitude optima: entropy argmax and noise-ratio extremum."""
    entropy = optimize_entropy(config.tolerance, config.grid_points)
    png = png_ratio_extremum()
    summary = _base_summary("optimize", config)
    summary.update(
        {
            "a_star_entropy": entropy.a_star,
            "a_star_png": png.a_star,
            "entropy": {
                "a_star": entropy.a_star,
                "objective_value": entropy.objective_value,
                "iterations": entropy.iterations,
                "method": entropy.method,
            },
            "png_ratio": {
                "a_star": png.a_star,
                "objective_value": png.objective_value,
                "iterations": png.iterations,
                "method": png.method,
            },
        }
    )
    return summary


def run_prepare(config: PrepareConfig) -> dict:
    """Build the requested channel state and verify it against its target."""
    spec = config.channel.to_spec()
    summary = _base_summary("prepare", config)
    target = make_channel(spec)

    if isinstance(target, Ensemble):
        summary.update(
            {
                "variant": spec.kind.value,
                "members": [
                    {"weight": w, "amplitudes": _amplitude_table(s)}
                    for w, s in target.members
                ],
                "fidelity_vs_target": 1.0,
                "cavity_residual": None,
            }
        )
        return summary

    if spec.kind is ChannelKind.BELL:
        prepared, cavity_residual = bell_preparation()
        fid = fidelity(prepared, target)
    else:
        prepared = target
        fid = fidelity(prepared, target)
        cavity_residual = None

    summary.update(
        {
            "variant": spec.kind.value,
            "amplitudes": _amplitude_table(prepared),
            "norm": prepared.norm(),
            "fidelity_vs_target": fid,
            "cavity_residual": cavity_residual,
        }
    )
    return summary


def _amplitude_table(state) -> list[dict]:
    entries = sorted(state.items(), key=lambda kv: (kv[0].spins, kv[0].momentum))
    return [
        {"ket": k.ket(), "re": v.real, "im": v.imag, "probability": abs(v) ** 2}
        for k, v in entries
    ]
