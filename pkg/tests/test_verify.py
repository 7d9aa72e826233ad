import math

import numpy as np
import pytest

from chiralqubit import (
    Context,
    EvolveConfig,
    InitialAngles,
    compare_paths,
    exact_jc_survival,
    jc_total_probability,
    kernel_bruteforce,
    run_suite,
)
from chiralqubit.model import dressed_params, system_from_dressed_ratio
from chiralqubit.scenarios import fig2_configs
from chiralqubit.verify import OracleReport, format_reports


def test_bruteforce_vanishes_at_t_zero():
    ctx = fig2_configs()[0].context()
    assert kernel_bruteforce(0.0, 0, ctx) == (0.0, 0.0)


def test_bruteforce_cost_guard():
    ctx = fig2_configs()[0].context()
    with pytest.raises(ValueError):
        kernel_bruteforce(25.0, 0, ctx)


def test_bruteforce_linear_in_coupling():
    from dataclasses import replace

    config = fig2_configs()[0]
    ctx = config.context()
    ctx_scaled = Context(ctx.dressed, replace(ctx.bath, u_sq=4.0 * ctx.bath.u_sq),
                         ctx.drive)
    g1, gp1 = kernel_bruteforce(1.0, 1, ctx)
    g2, gp2 = kernel_bruteforce(1.0, 1, ctx_scaled)
    assert gp2 == pytest.approx(4.0 * gp1, rel=1e-12)
    assert g2 == pytest.approx(4.0 * g1, rel=1e-12)


def test_kernel_suite_passes():
    reports = run_suite("kernels")
    assert len(reports) == 9
    assert all(r.passed for r in reports)


def test_bruteforce_grid_agreement():
    # Closed form vs full 2-D numerical evaluation on a 20-point grid.
    from chiralqubit import BathSpec
    from chiralqubit.bath import kernels

    system = system_from_dressed_ratio(10.0, 0.4, 50.0)
    dressed = dressed_params(system)
    bath = BathSpec(u_sq=0.1, omega0=52.0, temperature=30.0)
    ctx = Context(dressed, bath, 50.0)
    for t in np.linspace(0.25, 5.0, 20):
        for q in (0, 1, -1):
            closed = kernels(float(t), q, dressed, bath, 50.0)
            brute = kernel_bruteforce(float(t), q, ctx)
            for c, b in zip(closed, brute):
                if abs(c) == 0.0 and abs(b) == 0.0:
                    continue
                assert abs(c - b) / max(abs(c), abs(b)) <= 1e-6


def test_jc_oracle_decoupled_limit():
    t = np.linspace(0.0, 10.0, 101)
    assert np.allclose(exact_jc_survival(t, 0.5, 1e-30), 1.0, atol=1e-12)


def test_jc_oracle_strong_memory_oscillates():
    t = np.linspace(0.0, 10.0, 2001)
    population = exact_jc_survival(t, 0.0, 10.0)
    assert np.any(np.diff(population) > 0.0)
    assert population.min() < 0.1


def test_jc_probability_conservation():
    for u_sq in (0.01, 2.0):
        assert jc_total_probability(6.0, 0.3, u_sq) == pytest.approx(1.0, abs=1e-9)


def test_jc_suite_passes():
    reports = run_suite("jc")
    assert all(r.passed for r in reports)


def test_compare_paths_closed_system():
    system = system_from_dressed_ratio(5.0, 0.4, 25.0)
    ctx = Context(dressed_params(system), None, 25.0)
    grid = np.linspace(0.0, 10.0, 501)
    report = compare_paths(ctx, InitialAngles(math.pi / 3, 0.5), grid,
                           EvolveConfig(t_max=10.0, rtol=1e-12, atol=1e-14))
    assert report.passed
    assert report.max_abs_dev <= 1e-10


def test_compare_paths_with_nl_is_informational():
    config = fig2_configs()[0]
    grid = np.linspace(0.0, 1.0, 51)
    report = compare_paths(config.context(), InitialAngles(config.theta), grid,
                           EvolveConfig(t_max=1.0, include_nl=True))
    assert report.passed is None
    assert "cross-channel" in report.note
    assert math.isnan(report.tolerance)


def test_report_consistency_guard():
    with pytest.raises(ValueError):
        OracleReport("kernel_bruteforce_rel", {}, 1.0, 1.0, 1e-6, True)


def test_format_reports_table():
    reports = run_suite("kernels")
    table = format_reports(reports)
    assert "PASS" in table
    assert "kernel_bruteforce_rel" in table


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suite("nope")
