"""Smoke tests for the Python extension module."""

import math

import pytest

import drivenosc as dr


def test_version():
    assert dr.__version__


def test_params_validation():
    p = dr.Params(epsilon=5.0, hbar_bar=0.4, rho=6.25)
    assert p.drive_strength == pytest.approx(5.0 * 6.25 * math.sqrt(0.2), rel=1e-14)
    with pytest.raises(ValueError):
        dr.Params(epsilon=5.0, hbar_bar=0.4, rho=1.0)
    with pytest.raises(ValueError):
        dr.Params(epsilon=-1.0, hbar_bar=0.4, rho=6.25)


def test_ladder_operations():
    vac = dr.vacuum_state(4)
    assert vac.dim == 4
    assert vac[0] == 1.0 + 0.0j
    up, leakage = dr.apply_raising(vac)
    assert up[1] == pytest.approx(1.0)
    assert leakage == 0.0
    down = dr.apply_lowering(up)
    assert down[0] == pytest.approx(1.0)
    assert dr.norm_squared(vac) == 1.0
    assert dr.x2_expectation(vac, dr.Params(0.0, 0.4, 6.25)) == pytest.approx(0.2)


def test_propagation_matches_displacement_oracle():
    params = dr.Params(epsilon=1.0, hbar_bar=0.4, rho=6.25)
    gen = dr.build_h_generator(params)
    series = dr.propagate(gen, dr.vacuum_state(64), tau_end=2.0, sample_every=0.01)
    assert len(series) == 201
    alphas = dr.coherent_alpha_series(gen, series.taus)
    worst = 0.0
    for i, alpha in enumerate(alphas):
        oracle = dr.poisson_occupations(alpha, 64)
        worst = max(
            worst,
            max(abs(series.prob(i, n) - oracle[n]) for n in range(64)),
        )
    assert worst < 1e-8
    assert series.stats.max_norm_drift < 1e-9


def test_both_modes_and_census():
    k = dr.standard_run(dr.QuantizationMode.ConstantOfMotion, 5.0, tau_end=3.0)
    h = dr.standard_run(dr.QuantizationMode.Hamiltonian, 5.0, tau_end=3.0)
    ck = dr.excited_census(k, 1e-4).max_involved
    ch = dr.excited_census(h, 1e-4).max_involved
    assert ch > ck >= 1


def test_classical_oracle():
    sys = dr.ClassicalSystem(mass=1.0, omega=1.0, amplitude=1.0, drive_omega=6.25)
    s0 = dr.ClassicalState(x=1.0, v=0.0)
    assert dr.k_constancy_check(sys, s0, 20.0, 1e-3) < 1e-8
    assert dr.k_constancy_check_corrupted(sys, s0, 20.0, 1e-3) > 1e-3
    with pytest.raises(ValueError):
        dr.ClassicalSystem(mass=1.0, omega=1.0, amplitude=1.0, drive_omega=1.0)


def test_truncation_overflow_raises():
    params = dr.Params(epsilon=5.0, hbar_bar=0.4, rho=6.25)
    gen = dr.build_h_generator(params)
    policy = dr.TruncationPolicy(initial_dim=4, max_dim=8)
    with pytest.raises(dr.TruncationOverflowError):
        dr.propagate(gen, dr.vacuum_state(4), tau_end=5.0, policy=policy)
