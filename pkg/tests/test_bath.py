import math

import numpy as np
import pytest
from scipy.integrate import quad

from chiralqubit import (
    BathSpec,
    Context,
    ExactQuadrature,
    QuadratureError,
    ResonantApprox,
    decay_rates,
    kernel_sample,
    kernels,
    markovian_limits,
    mean_occupation,
    rate_profile,
    spectral_density,
)
from chiralqubit.bath import CHANNELS, channel_detuning
from chiralqubit.model import dressed_params, system_from_dressed_ratio


def make_context(omega_s=100.0, ratio=0.4, drive=500.0, detuning=10.0,
                 u_sq=0.1, temperature=0.0, occupation=None):
    system = system_from_dressed_ratio(omega_s, ratio, drive)
    bath = BathSpec(
        u_sq=u_sq,
        omega0=drive + detuning,
        temperature=temperature,
        occupation=occupation if occupation is not None else ResonantApprox(),
    )
    return Context(dressed_params(system), bath, drive)


# --- spectral density -------------------------------------------------------

def test_spectral_density_peak_and_halfwidth():
    bath = BathSpec(u_sq=0.3, omega0=12.0)
    peak = 0.3 / (2.0 * math.pi)
    assert spectral_density(12.0, bath) == pytest.approx(peak, rel=1e-15)
    assert spectral_density(13.0, bath) == pytest.approx(peak / 2.0, rel=1e-15)
    assert spectral_density(11.0, bath) == pytest.approx(peak / 2.0, rel=1e-15)


def test_spectral_density_full_integral():
    bath = BathSpec(u_sq=0.25, omega0=7.0, lam=1.0)
    value, _ = quad(lambda w: spectral_density(w, bath), -np.inf, np.inf)
    assert value == pytest.approx(bath.u_sq * bath.lam / 2.0, rel=1e-8)


# --- mean occupation --------------------------------------------------------

def test_mean_occupation_zero_temperature():
    assert mean_occupation(3.7, 0.0) == 0.0


def test_mean_occupation_log_two():
    temperature = 2.5
    assert mean_occupation(temperature * math.log(2.0), temperature) == pytest.approx(1.0, rel=1e-14)


def test_mean_occupation_unit_ratio():
    assert mean_occupation(4.0, 4.0) == pytest.approx(0.5819767068693265, abs=1e-15)


@pytest.mark.parametrize("omega", [0.0, -1.0])
def test_mean_occupation_rejects_nonpositive(omega):
    with pytest.raises(ValueError):
        mean_occupation(omega, 1.0)


# --- kernels ----------------------------------------------------------------

def test_kernels_vanish_at_t_zero():
    ctx = make_context(temperature=100.0)
    sample = kernel_sample(0.0, ctx)
    assert all(v == 0.0 for v in sample.gamma.values())
    assert all(v == 0.0 for v in sample.gamma_prime.values())


def test_absorption_kernel_zero_at_zero_temperature():
    ctx = make_context(temperature=0.0)
    for t in (0.1, 1.0, 5.0, 20.0):
        for q in CHANNELS:
            g, _ = kernels(t, q, ctx.dressed, ctx.bath, ctx.drive)
            assert g == 0.0


def test_emission_long_time_limit_matches_residue():
    # t -> infinity: Re K'_q -> u^2 lam^2 / (2 (lam^2 + d_q^2)).
    ctx = make_context(temperature=0.0)
    for q in CHANNELS:
        d_q = channel_detuning(q, ctx.bath, ctx.dressed, ctx.drive)
        expected = ctx.bath.u_sq / (2.0 * (1.0 + d_q**2))
        _, gp = kernels(2000.0, q, ctx.dressed, ctx.bath, ctx.drive)
        assert gp.real == pytest.approx(expected, rel=1e-9)


def test_quadrature_cross_check_at_zero_temperature():
    # Positive-line adaptive quadrature vs the full-line closed form:
    # relative error <= 1e-4 with the default cutoffs, late time, T = 0.
    system = system_from_dressed_ratio(1.0, 0.4, 50.0)
    d = dressed_params(system)
    bath_closed = BathSpec(u_sq=0.1, omega0=52.0, temperature=0.0)
    bath_quad = BathSpec(u_sq=0.1, omega0=52.0, temperature=0.0,
                         occupation=ExactQuadrature(ir_cutoff=1e-6))
    for q in CHANNELS:
        _, gp_closed = kernels(20.0, q, d, bath_closed, 50.0)
        _, gp_quad, error = kernels(20.0, q, d, bath_quad, 50.0, with_error=True)
        assert gp_quad.real == pytest.approx(gp_closed.real, rel=1e-4)
        assert error["ir_cutoff"] == 1e-6
        assert error["tail_bound"] > 0.0


def test_kernel_scaling_linear_in_coupling():
    scale = 3.5
    for occupation in (ResonantApprox(), ExactQuadrature()):
        ctx1 = make_context(omega_s=1.0, drive=50.0, detuning=2.0,
                            u_sq=0.1, temperature=5.0, occupation=occupation)
        ctx2 = make_context(omega_s=1.0, drive=50.0, detuning=2.0,
                            u_sq=0.1 * scale, temperature=5.0, occupation=occupation)
        for q in CHANNELS:
            g1, gp1 = kernels(3.0, q, ctx1.dressed, ctx1.bath, ctx1.drive)
            g2, gp2 = kernels(3.0, q, ctx2.dressed, ctx2.bath, ctx2.drive)
            assert g2 == pytest.approx(scale * g1, rel=1e-12)
            assert gp2 == pytest.approx(scale * gp1, rel=1e-12)


def test_kernel_lipschitz_bound():
    # |K'(t+h) - K'(t)| <= (u^2 lam / 2)(1 + |d_q|/lam) h on a fine grid.
    ctx = make_context(temperature=0.0)
    h = 1e-4
    grid = np.arange(0.0, 3.0, 0.05)
    for q in CHANNELS:
        d_q = channel_detuning(q, ctx.bath, ctx.dressed, ctx.drive)
        bound = ctx.bath.u_sq / 2.0 * (1.0 + abs(d_q)) * h
        for t in grid:
            _, gp1 = kernels(t, q, ctx.dressed, ctx.bath, ctx.drive)
            _, gp2 = kernels(t + h, q, ctx.dressed, ctx.bath, ctx.drive)
            assert abs(gp2 - gp1) <= bound


def test_emission_time_average_positive_for_figure_sets():
    # Dense grid: the emission kernels oscillate at up to |d_q| ~ omega_s.
    from chiralqubit import kernel_profile

    grid = np.linspace(0.0, 10.0, 20001)
    for detuning in (0.1, 10.0):
        for temperature in (0.0, 100.0):
            ctx = make_context(detuning=detuning, temperature=temperature)
            profile = kernel_profile(grid, ctx)
            for i in range(3):
                average = np.trapezoid(profile[:, 1, i].real, grid) / 10.0
                assert average > 0.0


def test_resonant_rejects_nonpositive_channel():
    # drive below omega_s makes the q = -1 channel frequency negative.
    ctx = make_context(omega_s=100.0, drive=50.0, detuning=1.0)
    with pytest.raises(ValueError, match="occupation undefined"):
        kernels(1.0, -1, ctx.dressed, ctx.bath, ctx.drive)


def test_quadrature_nonconvergence_reported():
    strategy = ExactQuadrature(rel_tol=1e-16, abs_tol_factor=1e-30)
    ctx = make_context(omega_s=1.0, drive=50.0, detuning=2.0,
                       temperature=20.0, occupation=strategy)
    with pytest.raises(QuadratureError):
        kernels(5.0, 0, ctx.dressed, ctx.bath, ctx.drive)


# --- decay rates ------------------------------------------------------------

def test_gamma_z_vanishes_without_mixing():
    ctx = make_context(ratio=1.0)  # d_eps = 0 so delta_0 = 0
    for t in (0.5, 2.0, 10.0):
        assert decay_rates(t, ctx.dressed, ctx.bath, ctx.drive).gamma_z == 0.0


def test_zero_temperature_rate_reduction():
    ctx = make_context(temperature=0.0)
    d = ctx.dressed
    for t in (0.5, 3.0):
        rates = decay_rates(t, d, ctx.bath, ctx.drive)
        _, gp_plus = kernels(t, 1, d, ctx.bath, ctx.drive)
        _, gp_minus = kernels(t, -1, d, ctx.bath, ctx.drive)
        assert rates.gamma_plus == pytest.approx(2.0 * d.delta_minus**2 * gp_minus.real, rel=1e-13)
        assert rates.gamma_minus == pytest.approx(2.0 * d.delta_plus**2 * gp_plus.real, rel=1e-13)


def test_gamma_z_identity():
    ctx = make_context(temperature=100.0)
    for t in (0.3, 1.7):
        rates = decay_rates(t, ctx.dressed, ctx.bath, ctx.drive)
        g0, gp0 = kernels(t, 0, ctx.dressed, ctx.bath, ctx.drive)
        expected = 2.0 * ctx.dressed.delta_0**2 * (g0 + gp0).real
        assert rates.gamma_z == pytest.approx(expected, rel=1e-13)


def test_rate_profile_matches_pointwise():
    ctx = make_context(temperature=100.0)
    grid = np.linspace(0.0, 5.0, 7)
    profile = rate_profile(grid, ctx)
    for i, t in enumerate(grid):
        sample = decay_rates(float(t), ctx.dressed, ctx.bath, ctx.drive)
        assert np.allclose(profile[i], sample.as_array(), rtol=1e-13, atol=1e-18)


def test_closed_system_rates_zero():
    system = system_from_dressed_ratio(5.0, 0.4, 25.0)
    ctx = Context(dressed_params(system), None, 25.0)
    assert np.all(rate_profile(np.linspace(0, 5, 11), ctx) == 0.0)


# --- Markovian limits -------------------------------------------------------

def test_markovian_channel_values():
    # Resonant channel (d_q = 0) contributes u^2/2; d_q = 10 lam gives u^2/202.
    system = system_from_dressed_ratio(1.0, 0.4, 50.0)
    d = dressed_params(system)
    u_sq = 0.2
    bath0 = BathSpec(u_sq=u_sq, omega0=50.0, temperature=0.0)   # d_0 = 0
    _, gp = kernels(3000.0, 0, d, bath0, 50.0)
    assert gp.real == pytest.approx(u_sq / 2.0, rel=1e-9)
    bath10 = BathSpec(u_sq=u_sq, omega0=60.0, temperature=0.0)  # d_0 = 10
    _, gp = kernels(3000.0, 0, d, bath10, 50.0)
    assert gp.real == pytest.approx(u_sq / 202.0, rel=1e-9)


def test_markovian_limits_consistent_with_late_rates():
    # Rates at lambda t = 20 within 2% of the closed-form asymptotes.
    for temperature in (0.0, 100.0):
        ctx = make_context(detuning=10.0, temperature=temperature)
        limits = np.array(markovian_limits(ctx.dressed, ctx.bath, ctx.drive))
        late = decay_rates(20.0, ctx.dressed, ctx.bath, ctx.drive).as_array()
        assert np.all(np.abs(late - limits) <= 0.02 * np.abs(limits))


def test_gamma_z_settles_near_markovian_value():
    # Far-detuned regime: gamma_z oscillates through zero, then its
    # final-window mean sits within 5% of the closed-form limit.
    ctx = make_context(detuning=10.0, temperature=100.0)
    grid = np.linspace(0.0, 20.0, 8001)
    gz = rate_profile(grid, ctx)[:, 0]
    assert np.any(gz[1:] * gz[:-1] < 0.0)
    window = gz[grid >= 15.0]
    limit = markovian_limits(ctx.dressed, ctx.bath, ctx.drive)[0]
    assert abs(np.mean(window) - limit) <= 0.05 * abs(limit)


def test_markovian_limits_requires_resonant():
    ctx = make_context(omega_s=1.0, drive=50.0, detuning=2.0,
                       occupation=ExactQuadrature())
    with pytest.raises(ValueError):
        markovian_limits(ctx.dressed, ctx.bath, ctx.drive)


def test_bath_spec_validation():
    with pytest.raises(ValueError):
        BathSpec(u_sq=0.0, omega0=1.0)
    with pytest.raises(ValueError):
        BathSpec(u_sq=1.0, omega0=1.0, lam=0.0)
    with pytest.raises(ValueError):
        BathSpec(u_sq=1.0, omega0=1.0, temperature=-1.0)
    with pytest.raises(ValueError):
        ExactQuadrature(ir_cutoff=0.0)
