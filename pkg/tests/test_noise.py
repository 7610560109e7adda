"""Noise tests: closed forms, exact ratios, and the Monte Carlo estimators
against independent error-propagation oracles."""

import math

import numpy as np
import pytest

from gravchan.errors import IllConditionedError
from gravchan.noise import (
    NoiseParams,
    combined_noise,
    mc_phase_noise,
    mc_shot_noise,
    phase_noise_closed_form,
    shot_noise_closed_form,
    snr_report,
)


def params(n_atoms=100_000, c=1e-3, x0=math.pi / 2, seed=42, n_runs=4000, **kw):
    return NoiseParams(
        n_atoms=n_atoms, c=c, delta_phi_mean=x0, seed=seed, n_runs=n_runs, **kw
    )


# ------------------------------------------------------------- closed forms

def test_shot_noise_values():
    assert shot_noise_closed_form(10**6, False) == pytest.approx(1e-3)
    assert shot_noise_closed_form(10**6, True) == pytest.approx(math.sqrt(2) * 1e-3)


def test_shot_ratio_is_sqrt_two_for_any_n():
    for n in (1, 10, 12345, 10**8):
        ratio = shot_noise_closed_form(n, True) / shot_noise_closed_form(n, False)
        assert ratio == pytest.approx(math.sqrt(2.0), abs=1e-15)


def test_phase_noise_values():
    assert phase_noise_closed_form(1.0, math.pi, False) == pytest.approx(1.0)
    ratio = phase_noise_closed_form(1.0, 1.3, True) / phase_noise_closed_form(1.0, 1.3, False)
    assert ratio == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-15)


def test_phase_noise_general_boundary():
    assert phase_noise_closed_form(1.0, 1.0, True, amplitude_a=1.0) == 0.0


def test_general_ratio_random_amplitudes():
    rng = np.random.default_rng(5)
    for a in rng.uniform(0.05, 0.95, size=100):
        with_ch = phase_noise_closed_form(2.0, 0.9, True, amplitude_a=float(a))
        without = phase_noise_closed_form(2.0, 0.9, False)
        b = math.sqrt(1.0 - a * a)
        assert abs(with_ch / without - math.sqrt(a * b)) < 1e-15


def test_general_ratio_reduces_to_bell():
    a = math.sqrt(0.5)
    with_ch = phase_noise_closed_form(1.0, 1.7, True, amplitude_a=a)
    bell = phase_noise_closed_form(1.0, 1.7, True)
    assert with_ch == pytest.approx(bell, abs=1e-15)


def test_coherence_scale_never_amplifies():
    for a in np.linspace(0.01, 0.99, 50):
        b = math.sqrt(1.0 - a * a)
        assert math.sqrt(a * b) < 1.0


# ------------------------------------------------------------ mc shot noise

def test_mc_shot_matches_binomial_propagation_oracle():
    # oracle: delta_phi = sigma_count * |d(dphi)/d(count)| with binomial
    # sigma and the fringe slope at the operating point
    p = params(n_runs=6000)
    n, x0 = p.n_atoms, p.delta_phi_mean

    est, se = mc_shot_noise(p, with_channel=False)
    sigma = math.sqrt(n * 0.5 * (1 + math.cos(x0)) * (1 - 0.5 * (1 + math.cos(x0))))
    oracle = sigma * 2.0 / (n * abs(math.sin(x0)))
    assert oracle == pytest.approx(1.0 / math.sqrt(n), abs=1e-15)
    assert abs(est - oracle) < 3.0 * se

    est_ch, se_ch = mc_shot_noise(p, with_channel=True)
    trials = n // 2
    p_full = 0.5 * (1 + math.cos(x0))
    sigma_ch = math.sqrt(trials * p_full * (1 - p_full))
    oracle_ch = sigma_ch * 4.0 / (n * abs(math.sin(x0)))
    assert oracle_ch == pytest.approx(math.sqrt(2.0 / n), abs=1e-12)
    assert abs(est_ch - oracle_ch) < 3.0 * se_ch


def test_mc_shot_naive_model_departs_from_sqrt_two():
    # naive quarter-fringe propagation gives
    # sqrt((1+cos)(3-cos)) / (sqrt(N) |sin|), not sqrt(2/N)
    p = params(n_runs=6000)
    n, x0 = p.n_atoms, p.delta_phi_mean
    cos0 = math.cos(x0)
    oracle = math.sqrt((1 + cos0) * (3 - cos0)) / (math.sqrt(n) * abs(math.sin(x0)))
    est, se = mc_shot_noise(p, with_channel=True, model="naive")
    assert abs(est - oracle) < 3.0 * se
    assert oracle > 1.15 * math.sqrt(2.0 / n)  # visibly not the atom-loss value


def test_mc_shot_deterministic():
    p = params(n_runs=500)
    assert mc_shot_noise(p, True) == mc_shot_noise(p, True)
    assert mc_shot_noise(p, False) == mc_shot_noise(p, False)


def test_mc_shot_seed_changes_result():
    a = mc_shot_noise(params(n_runs=500, seed=1), True)
    b = mc_shot_noise(params(n_runs=500, seed=2), True)
    assert a != b


def test_mc_shot_ill_conditioned_near_extremum():
    with pytest.raises(IllConditionedError):
        mc_shot_noise(params(x0=0.01), False)
    with pytest.raises(IllConditionedError):
        mc_shot_noise(params(x0=math.pi), True)


def test_mc_shot_rejects_unknown_model():
    with pytest.raises(ValueError):
        mc_shot_noise(params(), True, model="bogus")


# ----------------------------------------------------------- mc phase noise

def test_mc_phase_zero_constant():
    est, se = mc_phase_noise(params(c=0.0, n_runs=100), with_channel=False)
    assert est == 0.0
    assert se == 0.0


def test_mc_phase_ratio_matches_bell():
    p = params(n_runs=40_000)
    nc, _ = mc_phase_noise(p, with_channel=False)
    ch, _ = mc_phase_noise(p, with_channel=True)
    ratio = ch / nc
    assert abs(ratio - 1.0 / math.sqrt(2.0)) / (1.0 / math.sqrt(2.0)) < 0.02


def test_mc_phase_ratio_general_amplitude():
    # |a|^2 = 0.25: ratio sqrt(|a||b|) = (0.1875)^(1/4)
    p = params(n_runs=40_000, amplitude_a=0.5)
    nc, _ = mc_phase_noise(p, with_channel=False)
    ch, _ = mc_phase_noise(p, with_channel=True)
    want = (0.25 * 0.75) ** 0.25
    assert want == pytest.approx(0.658, abs=5e-4)
    assert abs(ch / nc - want) / want < 0.02


def test_mc_phase_deterministic():
    p = params(n_runs=500)
    assert mc_phase_noise(p, True) == mc_phase_noise(p, True)


def test_mc_identical_under_thread_parallelism(monkeypatch):
    # per-run seed splitting makes serial and threaded execution identical
    p = params(n_runs=600)
    monkeypatch.setenv("GRAVCHAN_THREADS", "1")
    serial = (mc_shot_noise(p, True), mc_phase_noise(p, True))
    monkeypatch.setenv("GRAVCHAN_THREADS", "4")
    threaded = (mc_shot_noise(p, True), mc_phase_noise(p, True))
    assert serial == threaded


def test_mc_standard_error_scales_with_runs():
    # 4x the runs should roughly halve the reported standard error
    _, se1 = mc_shot_noise(params(n_runs=2000), False)
    _, se4 = mc_shot_noise(params(n_runs=8000), False)
    assert se1 / se4 == pytest.approx(2.0, rel=0.20)


# --------------------------------------------------------------- snr_report

def test_report_exact_ratios():
    rep = snr_report(params(n_runs=64))
    assert rep.shot_ratio == math.sqrt(2.0)
    assert rep.phase_ratio == math.sqrt(0.5)


def test_report_weight_limits():
    base = params(n_atoms=10**6, n_runs=64)
    shot_only = snr_report(
        NoiseParams(**{**_as_kwargs(base), "weight": 0.0})
    )
    assert shot_only.combined_ratio == pytest.approx(math.sqrt(2.0), abs=1e-12)
    weighted = snr_report(NoiseParams(**{**_as_kwargs(base), "weight": 100.0}))
    assert weighted.combined_ratio == pytest.approx(math.sqrt(0.5), rel=0.01)


def test_report_mc_fields_track_closed_forms():
    rep = snr_report(params(n_runs=4000))
    assert abs(rep.mc_shot_no_channel - rep.shot_no_channel) < 3 * rep.mc_shot_no_channel_se
    assert abs(rep.mc_shot_with_channel - rep.shot_with_channel) < 3 * rep.mc_shot_with_channel_se
    assert abs(rep.mc_phase_ratio - rep.phase_ratio) / rep.phase_ratio < 0.05


def test_report_noiseless_phase_ratio_undefined():
    rep = snr_report(params(c=0.0, n_runs=64))
    assert rep.mc_phase_ratio is None
    assert rep.mc_phase_no_channel == 0.0
    assert rep.combined_ratio == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_combined_noise_helper():
    assert combined_noise(0.0, 1.0, 3.0) == 3.0
    assert combined_noise(2.0, 3.0, 4.0) == pytest.approx(math.hypot(6.0, 4.0))


def test_params_validation():
    with pytest.raises(ValueError):
        NoiseParams(n_atoms=0, c=1e-3, delta_phi_mean=1.0, seed=1, n_runs=10)
    with pytest.raises(ValueError):
        NoiseParams(n_atoms=10, c=-1.0, delta_phi_mean=1.0, seed=1, n_runs=10)
    with pytest.raises(ValueError):
        NoiseParams(n_atoms=10, c=1e-3, delta_phi_mean=1.0, seed=1, n_runs=1)
    with pytest.raises(ValueError):
        NoiseParams(n_atoms=10, c=1e-3, delta_phi_mean=1.0, seed=1, n_runs=10,
                    shot_model="nope")
    with pytest.raises(ValueError):
        NoiseParams(n_atoms=10, c=1e-3, delta_phi_mean=1.0, seed=1, n_runs=10,
                    amplitude_a=1.5)


def _as_kwargs(p: NoiseParams) -> dict:
    return {
        "n_atoms": p.n_atoms,
        "c": p.c,
        "delta_phi_mean": p.delta_phi_mean,
        "seed": p.seed,
        "n_runs": p.n_runs,
        "amplitude_a": p.amplitude_a,
        "shot_model": p.shot_model,
        "weight": p.weight,
    }
