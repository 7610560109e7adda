"""Transfer-protocol tests: joint probabilities, fringe scans, direct
readout, and the phase-inversion helper."""

import math

import numpy as np
import pytest

from gravchan.channel import ChannelSpec
from gravchan.errors import PhaseOutOfRangeError
from gravchan.interferometer import (
    GravityModel,
    InterferometerParams,
    LaserPhases,
    PulseTiming,
    ground_probability,
)
from gravchan.protocol import (
    direct_measurement,
    estimate_phase,
    fringe_scan,
    run_transfer,
)

PARAMS = InterferometerParams(PulseTiming(T=0.1, k=1.0e7), GravityModel())


# ------------------------------------------------------------- run_transfer

def test_bell_bright_fringe():
    out = run_transfer(ChannelSpec.bell(), PARAMS, delta_phi_override=0.0)
    assert out.p_joint_g == pytest.approx(0.5, abs=1e-12)


def test_bell_dark_fringe():
    out = run_transfer(ChannelSpec.bell(), PARAMS, delta_phi_override=math.pi)
    assert out.p_joint_g == pytest.approx(0.0, abs=1e-12)


def test_general_channel_final_probability():
    out = run_transfer(ChannelSpec.general(0.6, 0.8), PARAMS, delta_phi_override=math.pi / 2)
    assert out.p_joint_g == pytest.approx(0.18, abs=1e-12)
    assert out.p_closed_form == pytest.approx(0.18, abs=1e-12)


def test_joint_probabilities_sum_to_selection():
    for dphi in np.linspace(0.0, 2.0 * math.pi, 13):
        for spec in (
            ChannelSpec.bell(),
            ChannelSpec.general(0.6, 0.8),
            ChannelSpec.cat(3),
            ChannelSpec.classical_mixture(),
        ):
            out = run_transfer(spec, PARAMS, delta_phi_override=float(dphi))
            assert out.p_joint_g + out.p_joint_e == pytest.approx(out.p_select, abs=1e-12)
            for p in (out.p_select, out.p_joint_g, out.p_joint_e):
                assert -1e-12 <= p <= 1.0 + 1e-12


def test_simulation_matches_closed_form_everywhere():
    for dphi in np.linspace(0.0, 2.0 * math.pi, 41):
        out = run_transfer(ChannelSpec.bell(), PARAMS, delta_phi_override=float(dphi))
        assert abs(out.p_joint_g - out.p_closed_form) < 1e-12


def test_conditional_readout_is_flat_for_bell():
    # post-selection washes out the fringe: P(g | selection) = 1/2 everywhere
    for dphi in (0.2, 1.0, 2.5, 4.0):
        out = run_transfer(ChannelSpec.bell(), PARAMS, delta_phi_override=dphi)
        assert out.p_conditional_g == pytest.approx(0.5, abs=1e-12)


def test_conditional_is_nan_at_dark_fringe():
    out = run_transfer(ChannelSpec.bell(), PARAMS, delta_phi_override=math.pi)
    assert math.isnan(out.p_conditional_g)


def test_remote_atom_cannot_be_probe():
    with pytest.raises(IndexError):
        run_transfer(ChannelSpec.bell(), PARAMS, remote_atom=1)
    with pytest.raises(IndexError):
        run_transfer(ChannelSpec.cat(3), PARAMS, remote_atom=5)


def test_remote_readout_equivalence_bell_and_cat():
    for spec, remotes in ((ChannelSpec.cat(3), (0, 1)), (ChannelSpec.cat(4), (0, 1, 2))):
        for dphi in np.linspace(0.0, 2.0 * math.pi, 9):
            outs = [
                run_transfer(spec, PARAMS, remote_atom=r, delta_phi_override=float(dphi))
                for r in remotes
            ]
            for other in outs[1:]:
                assert abs(outs[0].p_joint_g - other.p_joint_g) < 1e-12
                assert abs(outs[0].p_joint_e - other.p_joint_e) < 1e-12


def test_classical_mixture_equivalent_signal():
    for dphi in np.linspace(0.0, 2.0 * math.pi, 17):
        mixed = run_transfer(ChannelSpec.classical_mixture(), PARAMS, delta_phi_override=float(dphi))
        bell = run_transfer(ChannelSpec.bell(), PARAMS, delta_phi_override=float(dphi))
        assert abs(mixed.p_joint_g - bell.p_joint_g) < 1e-12


def test_amplitude_halving_vs_direct():
    for dphi in np.linspace(0.0, 2.0 * math.pi, 17):
        direct = direct_measurement(PARAMS, float(dphi))
        channel = run_transfer(ChannelSpec.bell(), PARAMS, delta_phi_override=float(dphi))
        assert abs(channel.p_joint_g - 0.5 * direct) < 1e-12


def test_phase_preservation_argmax():
    grid = np.linspace(0.0, 2.0 * math.pi, 257)
    direct = [direct_measurement(PARAMS, float(d)) for d in grid]
    channel = [
        run_transfer(ChannelSpec.bell(), PARAMS, delta_phi_override=float(d)).p_joint_g
        for d in grid
    ]
    assert int(np.argmax(direct)) == int(np.argmax(channel))


# -------------------------------------------------------------- fringe_scan

def test_fringe_scan_bell_three_points():
    rows = fringe_scan(ChannelSpec.bell(), PARAMS, [0.0, math.pi / 2, math.pi])
    got = [out.p_joint_g for _, out in rows]
    assert got == pytest.approx([0.5, 0.25, 0.0], abs=1e-12)


def test_fringe_scan_direct_mode():
    rows = fringe_scan(None, PARAMS, [0.0, math.pi / 2, math.pi])
    got = [out.p_joint_g for _, out in rows]
    assert got == pytest.approx([1.0, 0.5, 0.0], abs=1e-12)


def test_fringe_scan_cat_remote_choice_irrelevant():
    grid = [0.0, 0.9, 2.2, math.pi]
    r0 = fringe_scan(ChannelSpec.cat(3), PARAMS, grid, remote_atom=0)
    r1 = fringe_scan(ChannelSpec.cat(3), PARAMS, grid, remote_atom=1)
    for (_, a), (_, b) in zip(r0, r1):
        assert abs(a.p_joint_g - b.p_joint_g) < 1e-12


def test_fringe_scan_rejects_bad_grid():
    with pytest.raises(ValueError):
        fringe_scan(ChannelSpec.bell(), PARAMS, [])
    with pytest.raises(ValueError):
        fringe_scan(ChannelSpec.bell(), PARAMS, [0.0, math.nan])


# ------------------------------------------------------- direct_measurement

def test_direct_measurement_examples():
    assert direct_measurement(PARAMS, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert direct_measurement(PARAMS, 2.0 * math.pi / 3) == pytest.approx(0.25, abs=1e-12)


def test_direct_measurement_matches_fringe_formula():
    rng = np.random.default_rng(31)
    for dphi in rng.uniform(-10, 10, size=100):
        assert abs(direct_measurement(PARAMS, float(dphi)) - ground_probability(float(dphi))) < 1e-12


def test_direct_measurement_with_laser_phases():
    params = InterferometerParams(
        PulseTiming(0.1, 1e7), GravityModel(), LaserPhases(0.7, -1.1, 0.3)
    )
    for dphi in (0.0, 1.0, 2.0):
        assert abs(direct_measurement(params, dphi) - ground_probability(dphi)) < 1e-12


# ------------------------------------------------------------ estimate_phase

def test_estimate_phase_examples():
    assert estimate_phase(0.5, 0.5) == pytest.approx(0.0, abs=1e-7)
    assert estimate_phase(0.0, 0.5) == pytest.approx(math.pi)
    assert estimate_phase(0.25, 0.5) == pytest.approx(math.pi / 2)


def test_estimate_phase_roundtrip():
    for dphi in np.linspace(0.0, math.pi, 21):
        p = 0.5 * (1.0 + math.cos(dphi)) * 0.36
        assert estimate_phase(p, 0.36) == pytest.approx(float(dphi), abs=1e-9)


def test_estimate_phase_clamps_small_overshoot():
    assert estimate_phase(0.5 + 5e-10, 0.5) == 0.0
    assert estimate_phase(-5e-10, 0.5) == pytest.approx(math.pi)


def test_estimate_phase_out_of_range():
    with pytest.raises(PhaseOutOfRangeError):
        estimate_phase(0.51, 0.5)
    with pytest.raises(PhaseOutOfRangeError):
        estimate_phase(-1e-3, 0.5)
    with pytest.raises(PhaseOutOfRangeError):
        estimate_phase(0.1, 0.0)
