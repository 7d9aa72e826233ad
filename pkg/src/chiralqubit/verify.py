"""Independent oracles: brute-force kernel quadrature, the exact damped
two-level emitter, and the analytic-vs-ODE comparator.

Every oracle reports absolute and relative deviations against a fixed
tolerance from the single table below; nothing is tuned per test.

The damped-emitter solution is the one piece of outside knowledge in the
package: a two-level system whose excited amplitude obeys the exact memory
equation

    dc/dt = -int_0^t W exp(-(lam + i delta)(t - t1)) c(t1) dt1,
    W = u^2 lam / 2,

solved through the two-root characteristic equation
s^2 + (lam + i delta) s + W = 0.  The dressed qubit reduces to this problem
when delta_0 = 0, delta_plus = 1 and T = 0, which makes it an end-to-end
check of the whole TCL2 pipeline in a regime with a known answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .bath import Context, ResonantApprox, channel_detuning, kernels, mean_occupation
from .engine import EvolveConfig, evolve
from .model import QubitState
from .quadrature import integrate_adaptive
from .solution import InitialAngles, bloch_analytic

# One table: every oracle tolerance lives here.
TOLERANCES = {
    "kernel_bruteforce_rel": 1e-6,
    "jc_weak_abs": 1e-3,
    "jc_norm_abs": 1e-9,
    "paths_fig2_abs": 1e-6,
    "paths_closed_abs": 1e-10,
}

BRUTEFORCE_T_MAX = 20.0


@dataclass(frozen=True)
class OracleReport:
    """Outcome of one oracle comparison.

    ``passed`` is None for informational comparisons that have no
    pass/fail semantics (for example a path comparison with the
    cross-channel term enabled, which the analytic solution excludes).
    """

    name: str
    params: dict
    max_abs_dev: float
    max_rel_dev: float
    tolerance: float
    passed: bool | None
    note: str = ""

    def __post_init__(self):
        if self.passed is not None:
            pass_now = (
                self.max_rel_dev <= self.tolerance
                if self.name.endswith("_rel")
                else self.max_abs_dev <= self.tolerance
            )
            if pass_now != self.passed:
                raise ValueError("pass flag inconsistent with deviation vs tolerance")


def _report(name: str, params: dict, abs_dev: float, rel_dev: float,
            tolerance: float, note: str = "") -> OracleReport:
    passed = (rel_dev if name.endswith("_rel") else abs_dev) <= tolerance
    return OracleReport(name, params, abs_dev, rel_dev, tolerance, passed, note)


@lru_cache(maxsize=8)
def _lorentzian_cos_spline(s_max: float, points: int = 4001):
    """Tabulate F(s) = integral_R cos(s x) / (1 + x^2) dx on [0, s_max].

    Each node is an adaptive Fourier-weight quadrature over the half line
    (the integrand is even; the odd sine part integrates to zero).  The
    cubic spline keeps interpolation error near 1e-12, far below the
    brute-force tolerance.
    """
    s = np.linspace(0.0, s_max, points)
    vals = np.empty_like(s)
    vals[0] = math.pi
    for i, si in enumerate(s[1:], start=1):
        half, _ = quad(lambda x: 1.0 / (1.0 + x * x), 0.0, np.inf,
                       weight="cos", wvar=si, limit=400)
        vals[i] = 2.0 * half
    return CubicSpline(s, vals)


def kernel_bruteforce(t: float, q: int, ctx: Context):
    """Both memory kernels for one channel, with the time integral numeric.

    Independent of the closed form: the frequency integral of the
    Lorentzian against the oscillating phase is evaluated by Fourier-weight
    quadrature (tabulated once per time horizon), and the remaining time
    integral by adaptive oscillation-aware panels.  Resonant-approximation
    semantics (occupation frozen per channel, full-line frequency integral).
    """
    if t > BRUTEFORCE_T_MAX:
        raise ValueError(f"t = {t} exceeds the brute-force cost guard {BRUTEFORCE_T_MAX}")
    if ctx.bath is None:
        return 0.0 + 0.0j, 0.0 + 0.0j
    bath, dressed, drive = ctx.bath, ctx.dressed, ctx.drive
    if t == 0.0:
        return 0.0 + 0.0j, 0.0 + 0.0j
    lam, u_sq = bath.lam, bath.u_sq
    d_q = channel_detuning(q, bath, dressed, drive)
    spline = _lorentzian_cos_spline(math.ceil(lam * t))

    def inner(tau):
        # frequency integral at elapsed time tau, as a function of tau
        return (u_sq * lam / (2.0 * math.pi)) * np.exp(1j * d_q * tau) * spline(lam * tau)

    base, _ = integrate_adaptive(
        inner, 0.0, t,
        abs_tol=1e-13 * u_sq, rel_tol=1e-10,
        max_phase_rate=abs(d_q) + lam,
    )
    n_q = mean_occupation(drive + q * dressed.omega_s, bath.temperature)
    return n_q * base, (n_q + 1.0) * base


def jc_amplitude(t, delta: float, u_sq: float, lam: float = 1.0):
    """Exact excited-state amplitude of the damped two-level emitter."""
    w = u_sq * lam / 2.0
    a = lam + 1j * delta
    disc = np.sqrt(a * a - 4.0 * w + 0j)
    s1 = 0.5 * (-a + disc)
    s2 = 0.5 * (-a - disc)
    t = np.asarray(t, dtype=float)
    return ((s1 + a) * np.exp(s1 * t) - (s2 + a) * np.exp(s2 * t)) / (s1 - s2)


def exact_jc_survival(t, delta: float, u_sq: float, lam: float = 1.0):
    """Exact excited-state population |c(t)|^2."""
    return np.abs(jc_amplitude(t, delta, u_sq, lam)) ** 2


def jc_total_probability(t: float, delta: float, u_sq: float, lam: float = 1.0,
                         nu_max: float = 2000.0) -> float:
    """Survival plus integrated emission; equals 1 when the solution is exact.

    The emitted-field weight is integrated numerically over mode detunings
    nu in [-nu_max, nu_max]; the algebraic tail beyond is O(nu_max^-3).
    """
    w = u_sq * lam / 2.0
    a = lam + 1j * delta
    disc = np.sqrt(a * a - 4.0 * w + 0j)
    s1 = 0.5 * (-a + disc)
    s2 = 0.5 * (-a - disc)
    a1 = (s1 + a) / (s1 - s2)
    a2 = -(s2 + a) / (s1 - s2)

    def emitted(nu):
        nu = np.asarray(nu, dtype=float)
        j1 = a1 * (np.exp((1j * nu + s1) * t) - 1.0) / (1j * nu + s1)
        j2 = a2 * (np.exp((1j * nu + s2) * t) - 1.0) / (1j * nu + s2)
        spectral = u_sq * lam**2 / (2.0 * math.pi * ((nu - delta) ** 2 + lam**2))
        return spectral * np.abs(j1 + j2) ** 2

    emitted_weight, _ = integrate_adaptive(
        emitted, -nu_max, nu_max,
        abs_tol=1e-12, rel_tol=1e-10,
        max_phase_rate=t,
        breakpoints=[delta - 2 * lam, delta, delta + 2 * lam, 0.0],
    )
    survival = float(exact_jc_survival(t, delta, u_sq, lam))
    return survival + float(emitted_weight.real)


def compare_paths(ctx: Context, angles: InitialAngles, grid,
                  cfg: EvolveConfig) -> OracleReport:
    """Max Bloch deviation between the ODE and analytic trajectories."""
    ode = evolve(QubitState.from_angles(angles.theta, angles.phi), cfg, ctx, grid)
    analytic = bloch_analytic(angles, grid, ctx)
    abs_dev = float(np.max(np.abs(ode.bloch - analytic.bloch)))
    scale = max(1e-30, float(np.max(np.abs(analytic.bloch))))
    params = {
        "omega_s": ctx.dressed.omega_s,
        "theta": angles.theta,
        "t_max": float(np.asarray(grid)[-1]),
        "include_nl": cfg.include_nl,
    }
    if cfg.include_nl:
        return OracleReport(
            "paths_with_nl", params, abs_dev, abs_dev / scale,
            float("nan"), None,
            "analytic solution excludes the cross-channel term; informational only",
        )
    tol = (TOLERANCES["paths_closed_abs"] if ctx.bath is None
           else TOLERANCES["paths_fig2_abs"])
    name = "paths_closed_abs" if ctx.bath is None else "paths_fig2_abs"
    return _report(name, params, abs_dev, abs_dev / scale, tol)


def _kernel_suite() -> list:
    from .scenarios import fig2_configs

    ctx = fig2_configs()[0].context()  # detuning 10, T = 1 parameter set
    reports = []
    for q in (0, 1, -1):
        for t in (0.5, 1.0, 5.0):
            closed = kernels(t, q, ctx.dressed, ctx.bath, ctx.drive)
            brute = kernel_bruteforce(t, q, ctx)
            devs = []
            for c, b in zip(closed, brute):
                if abs(c) == 0.0 and abs(b) == 0.0:
                    continue
                devs.append(abs(c - b) / max(abs(c), abs(b)))
            rel = max(devs)
            abs_dev = max(abs(c - b) for c, b in zip(closed, brute))
            reports.append(_report(
                "kernel_bruteforce_rel",
                {"q": q, "lambda_t": t},
                abs_dev, rel, TOLERANCES["kernel_bruteforce_rel"],
            ))
    return reports


def _jc_context(delta: float, u_sq: float):
    from .bath import BathSpec
    from .model import SystemParams, dressed_params

    omega_s = 1.0
    drive = 5.0
    system = SystemParams(omega_so=drive + omega_s, drive=drive, d_eps=0.0)
    bath = BathSpec(u_sq=u_sq, omega0=drive + omega_s + delta, temperature=0.0,
                    occupation=ResonantApprox())
    return Context(dressed_params(system), bath, drive)


def _jc_suite() -> list:
    reports = []
    u_sq, delta = 0.01, 0.0
    ctx = _jc_context(delta, u_sq)
    grid = np.linspace(0.0, 10.0, 501)
    exact = exact_jc_survival(grid, delta, u_sq)
    for include_nl in (False, True):
        cfg = EvolveConfig(t_max=10.0, rtol=1e-11, atol=1e-13, include_nl=include_nl)
        traj = evolve(QubitState.from_angles(0.0), cfg, ctx, grid)
        population = traj.states[:, 0, 0].real
        abs_dev = float(np.max(np.abs(population - exact)))
        reports.append(_report(
            "jc_weak_abs",
            {"u_sq": u_sq, "delta": delta, "include_nl": include_nl},
            abs_dev, abs_dev / float(np.max(exact)),
            TOLERANCES["jc_weak_abs"],
        ))
    for u_probe in (0.01, 2.0):
        total = jc_total_probability(6.0, 0.3, u_probe)
        dev = abs(total - 1.0)
        reports.append(_report(
            "jc_norm_abs", {"u_sq": u_probe, "delta": 0.3, "t": 6.0},
            dev, dev, TOLERANCES["jc_norm_abs"],
        ))
    return reports


def _paths_suite() -> list:
    from .scenarios import fig2_configs

    reports = []
    grid = np.linspace(0.0, 10.0, 1001)
    for config in fig2_configs():
        cfg = EvolveConfig(t_max=10.0, rtol=config.rtol, atol=config.atol)
        reports.append(compare_paths(
            config.context(), InitialAngles(config.theta, config.phi), grid, cfg,
        ))
    # Closed system: both paths are exact, deviation is pure integrator noise.
    from .model import system_from_dressed_ratio, dressed_params

    system = system_from_dressed_ratio(5.0, 0.4, 25.0)
    ctx = Context(dressed_params(system), None, system.drive)
    cfg = EvolveConfig(t_max=10.0, rtol=1e-12, atol=1e-14)
    reports.append(compare_paths(ctx, InitialAngles(math.pi / 3, 0.5), grid, cfg))
    return reports


SUITES = {
    "kernels": _kernel_suite,
    "jc": _jc_suite,
    "paths": _paths_suite,
}


def run_suite(name: str) -> list:
    """Run one oracle suite (or 'all'); returns the reports."""
    if name == "all":
        reports = []
        for suite in SUITES.values():
            reports.extend(suite())
        return reports
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name]()


def format_reports(reports) -> str:
    lines = [
        f"{'oracle':<22} {'abs dev':>12} {'rel dev':>12} {'tolerance':>11} {'status':>8}  params",
        "-" * 100,
    ]
    for r in reports:
        status = "PASS" if r.passed else ("FAIL" if r.passed is not None else "info")
        params = ", ".join(f"{k}={v}" for k, v in r.params.items())
        tol = "-" if math.isnan(r.tolerance) else f"{r.tolerance:.1e}"
        lines.append(
            f"{r.name:<22} {r.max_abs_dev:>12.3e} {r.max_rel_dev:>12.3e} "
            f"{tol:>11} {status:>8}  {params}"
        )
    return "\n".join(lines)
