"""Lorentzian bosonic bath: spectral density, occupation, memory kernels, rates.

Spectral density and occupation
-------------------------------
    J(w) = u^2 lam^2 / (2 pi [(w - omega0)^2 + lam^2])
    nbar(w) = 1 / (exp(w / T) - 1),   nbar = 0 at T = 0.

Memory kernels
--------------
For channel q in {0, +1, -1} and detuning-from-channel
Delta_q(w) = w - drive - q * omega_s, the time-local kernels are

    K_q(t)  = int dw J(w) nbar(w)     (exp(i Delta_q(w) t) - 1) / (i Delta_q(w))
    K'_q(t) = int dw J(w) (nbar(w)+1) (exp(i Delta_q(w) t) - 1) / (i Delta_q(w))

(the inner time integral has already been done analytically; the reading of
the memory phase as exp(i Delta (t - t1)) is the only one for which the
kernels stay bounded and their real/imaginary split is meaningful).

Two evaluation strategies are provided:

* ``ResonantApprox`` -- nbar is frozen at the channel frequency
  drive + q * omega_s and the frequency integral runs over the whole real
  line, giving the closed form

      K'_q(t) = (nbar_q + 1) (u^2 lam / 2) (1 - exp(-(lam - i d_q) t)) / (lam - i d_q)

  with d_q = omega0 - drive - q * omega_s (and K_q with nbar_q).  This is
  divergence-free and the default.
* ``ExactQuadrature`` -- adaptive oscillation-aware quadrature of the
  positive-frequency integral on [ir_cutoff, omega_max].  The thermal
  integrand diverges logarithmically as w -> 0+, so the infrared cutoff is
  explicit and must be reported with any result; the analytic Lorentzian
  tail above omega_max is added to the error estimate.

Decay rates
-----------
With mixing coefficients delta_0, delta_plus, delta_minus (Pauli-normalized
chirality operators), the time-dependent rates are

    gamma_z = 2 delta_0^2     Re(K_0 + K'_0)
    gamma_+ = 2 delta_plus^2  Re(K_+)  + 2 delta_minus^2 Re(K'_-)
    gamma_- = 2 delta_minus^2 Re(K_-)  + 2 delta_plus^2  Re(K'_+)

The pairing follows from expanding the dressed coupling operator
delta_0 C_z + delta_plus e^{-i omega_s t} C_minus - delta_minus e^{+i omega_s t} C_plus
in the weak-coupling double commutator: the raising dissipation channel
(jump operator C_plus) collects absorption from the q = +1 component with
weight delta_plus^2 and emission from the q = -1 component with weight
delta_minus^2, and vice versa for C_minus.  Rates may transiently go
negative; that is the non-Markovian signature, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .model import DressedParams
from .quadrature import QuadratureError, integrate_adaptive

CHANNELS = (0, 1, -1)


@dataclass(frozen=True)
class ResonantApprox:
    """Freeze the occupation at each channel frequency; integrate over the full line."""


@dataclass(frozen=True)
class ExactQuadrature:
    """Adaptive quadrature of the positive-frequency integral.

    ``ir_cutoff`` regularizes the Bose divergence at w -> 0+; ``omega_max``
    defaults to omega0 + 50 lam.  Tolerances follow the kernel magnitude
    scale: absolute abs_tol_factor * u^2, relative rel_tol.
    """

    ir_cutoff: float = 1e-6
    omega_max: float | None = None
    abs_tol_factor: float = 1e-10
    rel_tol: float = 1e-8

    def __post_init__(self):
        if not self.ir_cutoff > 0:
            raise ValueError(f"ir_cutoff must be positive, got {self.ir_cutoff}")


OccupationStrategy = ResonantApprox | ExactQuadrature


@dataclass(frozen=True)
class BathSpec:
    """Lorentzian bath parameters.

    Attributes
    ----------
    u_sq : float
        Coupling weight u^2 (> 0), an angular frequency; the integrated
        spectral density over the full line is u^2 lam / 2.
    omega0 : float
        Center frequency of the Lorentzian.
    temperature : float
        Bath temperature (>= 0) in the same frequency unit (k_B = 1).
    lam : float
        Linewidth; the bath memory time is 1 / lam.  The package's natural
        unit, so normally 1.
    occupation : ResonantApprox | ExactQuadrature
    """

    u_sq: float
    omega0: float
    temperature: float = 0.0
    lam: float = 1.0
    occupation: OccupationStrategy = field(default_factory=ResonantApprox)

    def __post_init__(self):
        if not self.u_sq > 0:
            raise ValueError(f"u_sq must be positive, got {self.u_sq}")
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be non-negative, got {self.temperature}")


@dataclass(frozen=True)
class Context:
    """Everything the evolution layers need: dressed system, bath, drive.

    ``bath=None`` means a closed system (all rates identically zero).
    """

    dressed: DressedParams
    bath: BathSpec | None
    drive: float


@dataclass(frozen=True)
class KernelSample:
    """Both kernels for all channels at one time, keyed 0, +1, -1."""

    t: float
    gamma: dict
    gamma_prime: dict


@dataclass(frozen=True)
class RateSample:
    t: float
    gamma_z: float
    gamma_plus: float
    gamma_minus: float

    def as_array(self) -> np.ndarray:
        return np.array([self.gamma_z, self.gamma_plus, self.gamma_minus])


def spectral_density(omega, bath: BathSpec):
    """Lorentzian spectral weight J(omega); defined for all real omega."""
    omega = np.asarray(omega, dtype=float)
    return bath.u_sq * bath.lam**2 / (
        2.0 * math.pi * ((omega - bath.omega0) ** 2 + bath.lam**2)
    )


def mean_occupation(omega: float, temperature: float) -> float:
    """Bose occupation of a mode at frequency omega > 0."""
    if omega <= 0:
        raise ValueError(
            f"mean occupation undefined for mode frequency {omega} <= 0"
        )
    if temperature == 0.0:
        return 0.0
    return 1.0 / math.expm1(omega / temperature)


def channel_detuning(q: int, bath: BathSpec, dressed: DressedParams, drive: float) -> float:
    """d_q = omega0 - drive - q * omega_s, the bath-peak offset of channel q."""
    return bath.omega0 - drive - q * dressed.omega_s


def _phase_factor(delta, t):
    """(exp(i delta t) - 1) / (i delta), stable at delta = 0."""
    delta = np.asarray(delta, dtype=float)
    x = delta * t
    return t * np.exp(0.5j * x) * np.sinc(x / (2.0 * math.pi))


def _resonant_base(t, bath: BathSpec, d_q: float):
    """Full-line Lorentzian kernel integral (unit occupation weight)."""
    z = bath.lam - 1j * d_q
    t = np.asarray(t, dtype=float)
    return (bath.u_sq * bath.lam / 2.0) * -np.expm1(-z * t) / z


def _quadrature_kernels(t, q, dressed, bath, drive, strategy: ExactQuadrature):
    if t == 0.0:
        return 0.0 + 0.0j, 0.0 + 0.0j, {"quadrature": 0.0, "tail_bound": 0.0}
    lam = bath.lam
    lo = strategy.ir_cutoff
    hi = strategy.omega_max if strategy.omega_max is not None else bath.omega0 + 50.0 * lam
    if hi <= lo:
        raise ValueError(f"omega_max {hi} must exceed ir_cutoff {lo}")
    shift = drive + q * dressed.omega_s
    temp = bath.temperature

    breakpoints = [bath.omega0 + k * lam for k in (-5.0, -2.0, -1.0, 0.0, 1.0, 2.0, 5.0)]
    breakpoints.append(shift)  # stationary point of the phase factor
    breakpoints.extend(lo * s for s in (10.0, 100.0, 1000.0))

    abs_tol = strategy.abs_tol_factor * bath.u_sq
    rel_tol = strategy.rel_tol

    def emission(w):
        weight = 1.0 if temp == 0.0 else 1.0 + 1.0 / np.expm1(w / temp)
        return spectral_density(w, bath) * weight * _phase_factor(w - shift, t)

    gp, gp_err = integrate_adaptive(
        emission, lo, hi, abs_tol=abs_tol, rel_tol=rel_tol,
        max_phase_rate=t, breakpoints=breakpoints,
    )

    if temp == 0.0:
        g = 0.0 + 0.0j
    else:
        def absorption(w):
            return spectral_density(w, bath) / np.expm1(w / temp) * _phase_factor(w - shift, t)

        g, _ = integrate_adaptive(
            absorption, lo, hi, abs_tol=abs_tol, rel_tol=rel_tol,
            max_phase_rate=t, breakpoints=breakpoints,
        )

    # Analytic Lorentzian tail above omega_max; a worst-case bound that is
    # reported alongside the quadrature estimate (the actual tail oscillates
    # and is usually far smaller).
    tail_mass = (bath.u_sq * lam / (2.0 * math.pi)) * (
        math.pi / 2.0 - math.atan((hi - bath.omega0) / lam)
    )
    delta_hi = hi - shift
    osc_sup = t if delta_hi <= 0 else min(t, 2.0 / delta_hi)
    n_hi = 0.0 if temp == 0.0 else 1.0 / math.expm1(hi / temp)
    error = {
        "quadrature": gp_err,
        "tail_bound": tail_mass * osc_sup * (1.0 + n_hi),
        "ir_cutoff": lo,
        "omega_max": hi,
    }
    return g, gp, error


def kernels(t: float, q: int, dressed: DressedParams, bath: BathSpec, drive: float,
            with_error: bool = False):
    """Memory kernels (K_q(t), K'_q(t)) for one channel.

    Under ``ResonantApprox`` the occupation is frozen at the channel
    frequency drive + q * omega_s, which must be positive.  With
    ``with_error=True`` a third element carries the quadrature error
    estimate, the analytic tail bound above omega_max, and the cutoffs
    used (zeros for the closed form); non-convergent quadrature raises
    :class:`chiralqubit.quadrature.QuadratureError` rather than returning
    silently degraded values.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if q not in CHANNELS:
        raise ValueError(f"channel must be one of {CHANNELS}, got {q}")
    strategy = bath.occupation
    if isinstance(strategy, ExactQuadrature):
        g, gp, error = _quadrature_kernels(t, q, dressed, bath, drive, strategy)
        return (g, gp, error) if with_error else (g, gp)

    w_q = drive + q * dressed.omega_s
    if w_q <= 0:
        raise ValueError(
            f"channel frequency drive + ({q})*omega_s = {w_q} <= 0: occupation "
            f"undefined under the resonant approximation"
        )
    n_q = mean_occupation(w_q, bath.temperature)
    base = complex(_resonant_base(t, bath, channel_detuning(q, bath, dressed, drive)))
    if with_error:
        return n_q * base, (n_q + 1.0) * base, {"quadrature": 0.0, "tail_bound": 0.0}
    return n_q * base, (n_q + 1.0) * base


def kernel_sample(t: float, ctx: Context) -> KernelSample:
    if ctx.bath is None:
        zero = {q: 0.0 + 0.0j for q in CHANNELS}
        return KernelSample(t, zero, dict(zero))
    g, gp = {}, {}
    for q in CHANNELS:
        g[q], gp[q] = kernels(t, q, ctx.dressed, ctx.bath, ctx.drive)
    return KernelSample(t, g, gp)


def kernel_matrix(t: float, ctx: Context) -> np.ndarray:
    """Kernels as a (2, 3) complex array: rows (K, K'), columns q = 0, +1, -1."""
    out = np.zeros((2, 3), dtype=complex)
    if ctx.bath is None:
        return out
    for i, q in enumerate(CHANNELS):
        out[0, i], out[1, i] = kernels(t, q, ctx.dressed, ctx.bath, ctx.drive)
    return out


def decay_rates(t: float, dressed: DressedParams, bath: BathSpec, drive: float) -> RateSample:
    """Time-dependent rates (gamma_z, gamma_+, gamma_-); may be negative."""
    g0, gp0 = kernels(t, 0, dressed, bath, drive)
    gp_, gpp = kernels(t, 1, dressed, bath, drive)
    gm_, gpm = kernels(t, -1, dressed, bath, drive)
    dp2 = dressed.delta_plus**2
    dm2 = dressed.delta_minus**2
    gamma_z = 2.0 * dressed.delta_0**2 * (g0 + gp0).real
    gamma_plus = 2.0 * dp2 * gp_.real + 2.0 * dm2 * gpm.real
    gamma_minus = 2.0 * dm2 * gm_.real + 2.0 * dp2 * gpp.real
    return RateSample(t, gamma_z, gamma_plus, gamma_minus)


def rate_profile(times, ctx: Context) -> np.ndarray:
    """Rates on a time array, shape (n, 3) ordered (gamma_z, gamma_+, gamma_-).

    Vectorized under the resonant approximation; falls back to a per-point
    loop for quadrature baths.
    """
    times = np.asarray(times, dtype=float)
    out = np.zeros((times.size, 3))
    if ctx.bath is None:
        return out
    bath, dressed, drive = ctx.bath, ctx.dressed, ctx.drive
    if isinstance(bath.occupation, ExactQuadrature):
        for i, t in enumerate(times):
            out[i] = decay_rates(float(t), dressed, bath, drive).as_array()
        return out
    dp2 = dressed.delta_plus**2
    dm2 = dressed.delta_minus**2
    base = {}
    occ = {}
    for q in CHANNELS:
        w_q = drive + q * dressed.omega_s
        if w_q <= 0:
            raise ValueError(
                f"channel frequency drive + ({q})*omega_s = {w_q} <= 0: occupation "
                f"undefined under the resonant approximation"
            )
        occ[q] = mean_occupation(w_q, bath.temperature)
        base[q] = _resonant_base(times, bath, channel_detuning(q, bath, dressed, drive)).real
    out[:, 0] = 2.0 * dressed.delta_0**2 * (2.0 * occ[0] + 1.0) * base[0]
    out[:, 1] = 2.0 * dp2 * occ[1] * base[1] + 2.0 * dm2 * (occ[-1] + 1.0) * base[-1]
    out[:, 2] = 2.0 * dm2 * occ[-1] * base[-1] + 2.0 * dp2 * (occ[1] + 1.0) * base[1]
    return out


def kernel_profile(times, ctx: Context) -> np.ndarray:
    """Kernels on a time array, shape (n, 2, 3); see :func:`kernel_matrix`."""
    times = np.asarray(times, dtype=float)
    out = np.zeros((times.size, 2, 3), dtype=complex)
    if ctx.bath is None:
        return out
    bath, dressed, drive = ctx.bath, ctx.dressed, ctx.drive
    if isinstance(bath.occupation, ExactQuadrature):
        for i, t in enumerate(times):
            out[i] = kernel_matrix(float(t), ctx)
        return out
    for i, q in enumerate(CHANNELS):
        w_q = drive + q * dressed.omega_s
        if w_q <= 0:
            raise ValueError(
                f"channel frequency drive + ({q})*omega_s = {w_q} <= 0: occupation "
                f"undefined under the resonant approximation"
            )
        n_q = mean_occupation(w_q, bath.temperature)
        base = _resonant_base(times, bath, channel_detuning(q, bath, dressed, drive))
        out[:, 0, i] = n_q * base
        out[:, 1, i] = (n_q + 1.0) * base
    return out


def markovian_limits(dressed: DressedParams, bath: BathSpec, drive: float):
    """Long-time limits (gamma_z, gamma_+, gamma_-) of the resonant rates."""
    if not isinstance(bath.occupation, ResonantApprox):
        raise ValueError("markovian_limits requires the ResonantApprox strategy")
    re_inf = {}
    occ = {}
    for q in CHANNELS:
        d_q = channel_detuning(q, bath, dressed, drive)
        re_inf[q] = bath.u_sq * bath.lam**2 / (2.0 * (bath.lam**2 + d_q**2))
        w_q = drive + q * dressed.omega_s
        if w_q <= 0:
            raise ValueError(
                f"channel frequency drive + ({q})*omega_s = {w_q} <= 0: occupation "
                f"undefined under the resonant approximation"
            )
        occ[q] = mean_occupation(w_q, bath.temperature)
    dp2 = dressed.delta_plus**2
    dm2 = dressed.delta_minus**2
    gamma_z = 2.0 * dressed.delta_0**2 * (2.0 * occ[0] + 1.0) * re_inf[0]
    gamma_plus = 2.0 * dp2 * occ[1] * re_inf[1] + 2.0 * dm2 * (occ[-1] + 1.0) * re_inf[-1]
    gamma_minus = 2.0 * dm2 * occ[-1] * re_inf[-1] + 2.0 * dp2 * (occ[1] + 1.0) * re_inf[1]
    return gamma_z, gamma_plus, gamma_minus
