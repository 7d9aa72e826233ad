"""Direct integration of the time-local (TCL2) master equation.

In the dressed basis the equation of motion is

    drho/dt = -i [H + H_L, rho] + L[rho] + NL[rho]

with H = (omega_s / 2) C_z, the Lindblad dissipator

    L[rho] = sum_m gamma_m(t) (C_m rho C_m^dag - 1/2 {C_m^dag C_m, rho}),
    m in {z, +, -},

and two optional corrections that are both OFF by default:

* ``include_lamb_shift`` adds the environment-induced Hermitian shift
  H_L = Im(K_0 - K'_0) delta_0^2 C_z^2
      + sum_{q=+,-} Im(K_q - K'_q) delta_q^2 C_q^dag C_q,
  which has no qualitative effect on the decoherence.
* ``include_nl`` adds the cross-channel (non-Lindblad) superoperator,
  negligible when the system timescale is short against the bath memory
  but kept term-by-term auditable here (see :func:`nl_terms`).

Rates can be evaluated on the fly (accurate, slower) or linearly
interpolated from a precomputed grid with spacing <= 0.01 / lam.
States are re-Hermitized at every output sample with the correction norm
logged; trace drift beyond 1e-7 or an eigenvalue below -1e-6 aborts the
run, since either signals that the integration (or the weak-coupling
premise) is no longer trustworthy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging

import numpy as np
from scipy.integrate import solve_ivp

from .bath import Context, kernel_matrix, kernel_profile, rate_profile
from .model import C_MINUS, C_PLUS, C_Z, DressedParams, QubitState

logger = logging.getLogger(__name__)

TRACE_ABORT = 1e-7
EIGENVALUE_ABORT = -1e-6

_P_UP = (C_PLUS @ C_MINUS).real.astype(complex)    # C_-^dag C_- = |up><up|
_P_DOWN = (C_MINUS @ C_PLUS).real.astype(complex)  # C_+^dag C_+ = |down><down|


class EvolutionError(RuntimeError):
    """Integration aborted: step failure, trace drift, or lost positivity."""


@dataclass(frozen=True)
class OnTheFly:
    """Evaluate rates (and kernels) exactly at every integrator step."""


@dataclass(frozen=True)
class PrecomputedGrid:
    """Linear interpolation from a uniform rate grid; spacing <= 0.01 / lam.

    Error budget: the interpolation error on a rate component oscillating
    at frequency f is about (spacing * f)^2 / 8 of that component's
    amplitude, so the fast mode suits slowly oscillating channels or
    quadrature baths where exact re-evaluation per step is expensive.
    """

    spacing: float = 0.01

    def __post_init__(self):
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing}")


RateSource = OnTheFly | PrecomputedGrid


@dataclass(frozen=True)
class EvolveConfig:
    t_max: float
    rtol: float = 1e-10
    atol: float = 1e-12
    first_step: float | None = None
    include_nl: bool = False
    include_lamb_shift: bool = False
    rate_source: RateSource = field(default_factory=OnTheFly)

    def __post_init__(self):
        if not self.t_max > 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("tolerances must be positive")


@dataclass
class Trajectory:
    """Sampled evolution: states, Bloch vectors, rates, entropy, provenance."""

    times: np.ndarray
    states: np.ndarray
    bloch: np.ndarray
    rates: np.ndarray
    entropy: np.ndarray
    path: str
    metadata: dict

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")


class RateEvaluator:
    """Uniform access to rates and kernel matrices for the integrator."""

    def __init__(self, ctx: Context, cfg: EvolveConfig, t_max: float):
        self.ctx = ctx
        self.need_kernels = cfg.include_nl or cfg.include_lamb_shift
        source = cfg.rate_source
        self._grid = None
        if isinstance(source, PrecomputedGrid):
            lam = ctx.bath.lam if ctx.bath is not None else 1.0
            if source.spacing > 0.01 / lam:
                raise ValueError(
                    f"precomputed rate grid spacing {source.spacing} exceeds "
                    f"0.01/lam = {0.01 / lam}"
                )
            n = int(np.ceil(t_max / source.spacing)) + 1
            self._grid = np.linspace(0.0, max(t_max, source.spacing), n + 1)
            self._rates = rate_profile(self._grid, ctx)
            self._kernels = kernel_profile(self._grid, ctx) if self.need_kernels else None

    def rates(self, t: float) -> np.ndarray:
        if self._grid is None:
            return rate_profile([t], self.ctx)[0]
        return np.array(
            [np.interp(t, self._grid, self._rates[:, k]) for k in range(3)]
        )

    def rates_many(self, times) -> np.ndarray:
        if self._grid is None:
            return rate_profile(times, self.ctx)
        times = np.asarray(times, dtype=float)
        return np.column_stack(
            [np.interp(times, self._grid, self._rates[:, k]) for k in range(3)]
        )

    def kernel_matrix(self, t: float) -> np.ndarray:
        if self._grid is None:
            return kernel_matrix(t, self.ctx)
        out = np.empty((2, 3), dtype=complex)
        for r in range(2):
            for c in range(3):
                out[r, c] = np.interp(t, self._grid, self._kernels[:, r, c].real) + 1j * np.interp(
                    t, self._grid, self._kernels[:, r, c].imag
                )
        return out


def lindblad_dissipator(rho: np.ndarray, gamma_z: float, gamma_plus: float,
                        gamma_minus: float) -> np.ndarray:
    """Dissipator with jump operators C_z, C_+, C_- and the given rates."""
    out = gamma_z * (C_Z @ rho @ C_Z - rho)
    out += gamma_plus * (C_PLUS @ rho @ C_MINUS - 0.5 * (_P_DOWN @ rho + rho @ _P_DOWN))
    out += gamma_minus * (C_MINUS @ rho @ C_PLUS - 0.5 * (_P_UP @ rho + rho @ _P_UP))
    return out


def _cross(x: np.ndarray, rho: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ rho @ y - rho @ y @ x


def nl_terms(rho: np.ndarray, kernel_mat: np.ndarray, d: DressedParams) -> list:
    """The six cross-channel groups, before adding the Hermitian conjugate.

    ``kernel_mat`` is the (2, 3) array of :func:`chiralqubit.bath.kernel_matrix`;
    rows (K, K'), columns q = 0, +1, -1.  Exposed separately so each group can
    be audited; :func:`nl_superoperator` sums them and adds the conjugate.
    """
    k0, kp, km = kernel_mat[0]
    k0p, kpp, kmp = kernel_mat[1]
    d0p = d.delta_0 * d.delta_plus
    d0m = d.delta_0 * d.delta_minus
    dpm = d.delta_plus * d.delta_minus
    return [
        k0 * (d0p * _cross(C_Z, rho, C_MINUS) - d0m * _cross(C_Z, rho, C_PLUS)),
        kp * (d0p * _cross(C_PLUS, rho, C_Z) - dpm * _cross(C_PLUS, rho, C_PLUS)),
        -km * (d0m * _cross(C_MINUS, rho, C_Z) + dpm * _cross(C_MINUS, rho, C_MINUS)),
        k0p * (d0p * _cross(C_MINUS, rho, C_Z) - d0m * _cross(C_PLUS, rho, C_Z)),
        kpp * (d0p * _cross(C_Z, rho, C_PLUS) - dpm * _cross(C_PLUS, rho, C_PLUS)),
        -kmp * (d0m * _cross(C_Z, rho, C_MINUS) + dpm * _cross(C_MINUS, rho, C_MINUS)),
    ]


def nl_superoperator(rho: np.ndarray, kernel_mat: np.ndarray, d: DressedParams) -> np.ndarray:
    """Cross-channel superoperator: sum of the six groups plus Hermitian conjugate."""
    total = sum(nl_terms(rho, kernel_mat, d))
    return total + total.conj().T


def lamb_shift_hamiltonian(kernel_mat: np.ndarray, d: DressedParams) -> np.ndarray:
    """Environment-induced Hermitian energy shift (off by default)."""
    k0, kp, km = kernel_mat[0]
    k0p, kpp, kmp = kernel_mat[1]
    h = (k0 - k0p).imag * d.delta_0**2 * (C_Z @ C_Z)
    h = h + (kp - kpp).imag * d.delta_plus**2 * _P_DOWN
    h = h + (km - kmp).imag * d.delta_minus**2 * _P_UP
    return h


def rhs(t: float, rho: np.ndarray, ctx: Context, cfg: EvolveConfig,
        evaluator: RateEvaluator | None = None) -> np.ndarray:
    """Right-hand side of the master equation at time t."""
    if evaluator is None:
        evaluator = RateEvaluator(ctx, cfg, cfg.t_max)
    h = 0.5 * ctx.dressed.omega_s * C_Z
    kernel_mat = None
    if cfg.include_lamb_shift or cfg.include_nl:
        kernel_mat = evaluator.kernel_matrix(t)
    if cfg.include_lamb_shift:
        h = h + lamb_shift_hamiltonian(kernel_mat, ctx.dressed)
    out = -1j * (h @ rho - rho @ h)
    gz, gp, gm = evaluator.rates(t)
    out += lindblad_dissipator(rho, gz, gp, gm)
    if cfg.include_nl:
        out += nl_superoperator(rho, kernel_mat, ctx.dressed)
    return out


def _vn_entropy_from_eigs(eigs: np.ndarray) -> np.ndarray:
    v = np.clip(eigs, 0.0, 1.0)
    return -np.sum(np.where(v > 0, v * np.log(np.where(v > 0, v, 1.0)), 0.0), axis=-1)


def evolve(rho0: QubitState, cfg: EvolveConfig, ctx: Context, grid=None) -> Trajectory:
    """Integrate from ``rho0`` and sample on ``grid`` (default 1001 points).

    Adaptive 8th-order Runge-Kutta stepping; samples are emitted on the
    output grid through the integrator's dense interpolant.
    """
    if grid is None:
        grid = np.linspace(0.0, cfg.t_max, 1001)
    grid = np.asarray(grid, dtype=float)
    if grid[0] != 0.0:
        raise ValueError("output grid must start at t = 0")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("output grid must be strictly increasing")
    if grid[-1] > cfg.t_max * (1 + 1e-12):
        raise ValueError("output grid extends beyond t_max")

    evaluator = RateEvaluator(ctx, cfg, float(grid[-1]))

    def fun(t, y):
        rho = y.reshape(2, 2)
        return rhs(t, rho, ctx, cfg, evaluator).ravel()

    sol = solve_ivp(
        fun,
        (0.0, float(grid[-1])),
        rho0.matrix.ravel().astype(complex),
        method="DOP853",
        t_eval=grid,
        rtol=cfg.rtol,
        atol=cfg.atol,
        first_step=cfg.first_step,
    )
    if not sol.success:
        raise EvolutionError(
            f"integrator aborted at t = {sol.t[-1] if sol.t.size else 0.0}: {sol.message}"
        )

    states = np.ascontiguousarray(sol.y.T).reshape(-1, 2, 2)
    states[0] = rho0.matrix
    herm_dev = np.max(np.abs(states - states.conj().transpose(0, 2, 1)))
    states = 0.5 * (states + states.conj().transpose(0, 2, 1))
    if herm_dev > 1e-9:
        logger.warning("re-Hermitization correction %.3e", herm_dev)
    else:
        logger.debug("re-Hermitization correction %.3e", herm_dev)

    traces = np.einsum("nii->n", states).real
    trace_drift = float(np.max(np.abs(traces - 1.0)))
    if trace_drift > TRACE_ABORT:
        raise EvolutionError(
            f"trace drift {trace_drift:.3e} exceeds {TRACE_ABORT}: integration untrustworthy"
        )
    eigs = np.linalg.eigvalsh(states)
    min_eig = float(eigs.min())
    if min_eig < EIGENVALUE_ABORT:
        raise EvolutionError(
            f"eigenvalue {min_eig:.3e} below {EIGENVALUE_ABORT}: parameters leave "
            f"the weak-coupling regime"
        )

    bloch = np.column_stack([
        2.0 * states[:, 0, 1].real,
        -2.0 * states[:, 0, 1].imag,
        (states[:, 0, 0] - states[:, 1, 1]).real,
    ])
    rates = evaluator.rates_many(grid)
    entropy = _vn_entropy_from_eigs(eigs)
    metadata = {
        "config": cfg,
        "context": ctx,
        "max_hermiticity_correction": float(herm_dev),
        "trace_drift": trace_drift,
        "min_eigenvalue": min_eig,
        "max_purity": float(np.max(np.einsum("nij,nji->n", states, states).real)),
        "nfev": int(sol.nfev),
        "solver": "DOP853",
    }
    return Trajectory(grid, states, bloch, rates, entropy, "ODE", metadata)
