"""Analytic Bloch-vector evolution, von Neumann entropy, pointer states.

With time-dependent rates gamma_z, gamma_+, gamma_- the Bloch vector of the
dressed qubit has the closed-form solution

    R_x(t) = exp(-r(t)) cos(omega_s t + phi) sin(theta)
    R_y(t) = exp(-r(t)) sin(omega_s t + phi) sin(theta)
    R_z(t) = exp(-p(t)) [cos(theta) + q(t)]

with the cumulative damping integrals

    r(t) = 1/2 int_0^t [gamma_+ + gamma_- + 4 gamma_z]
    p(t) = int_0^t [gamma_+ + gamma_-]
    q(t) = int_0^t exp(p(t1)) [gamma_+(t1) - gamma_-(t1)] dt1.

The integrals are evaluated by composite Gauss-Legendre quadrature on a
refinement of the output grid fine enough to resolve the fastest rate
oscillation (the exp(p) weight inside q is reproduced by a nested panel
integral, keeping the whole construction high order).

The entropy of a qubit state depends only on the Bloch norm,
E = -sum_i v_i ln v_i with v_{1,2} = (1 +- |R|) / 2, and the pointer angle
is the initial polar angle whose trajectory minimizes the time-averaged
entropy (azimuth fixed to 0, ties broken toward larger theta).
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .bath import Context, rate_profile
from .engine import PrecomputedGrid, RateEvaluator, Trajectory

_NODES7, _WEIGHTS7 = np.polynomial.legendre.leggauss(7)
_NODES5, _WEIGHTS5 = np.polynomial.legendre.leggauss(5)

NORM_REJECT = 1e-6
NORM_CLIP = 1e-9


@dataclass(frozen=True)
class InitialAngles:
    """Bloch angles of the initial dressed-basis state."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi}")

    def bloch(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array(
            [st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)]
        )


@dataclass(frozen=True)
class DampingIntegrals:
    """Cumulative damping integrals sampled on a time grid."""

    grid: np.ndarray
    r: np.ndarray
    p: np.ndarray
    q: np.ndarray


def _oscillation_scale(ctx: Context) -> float:
    """Fastest frequency appearing in the rate functions."""
    if ctx.bath is None:
        return 1.0
    from .bath import CHANNELS, channel_detuning

    dets = [abs(channel_detuning(qq, ctx.bath, ctx.dressed, ctx.drive)) for qq in CHANNELS]
    return ctx.bath.lam + max(dets)


def damping_integrals(grid, ctx: Context, rates_fn=None, max_panel_phase: float = 0.7
                      ) -> DampingIntegrals:
    """Evaluate (r, p, q) on ``grid`` by composite Gauss-Legendre quadrature.

    ``rates_fn`` maps a time array to an (n, 3) array of rates; defaults to
    the bath's profile.  Each grid interval is split into panels short
    enough that the fastest rate oscillation advances at most
    ``max_panel_phase`` radians per panel.
    """
    grid = np.asarray(grid, dtype=float)
    if grid[0] != 0.0:
        raise ValueError("grid must start at t = 0")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    if rates_fn is None:
        rates_fn = lambda ts: rate_profile(ts, ctx)

    freq = _oscillation_scale(ctx)
    cap = max_panel_phase / freq

    # Panel edges: refinement of the caller grid.
    lefts, rights, owner = [], [], []
    for i, (lo, hi) in enumerate(zip(grid[:-1], grid[1:])):
        n = max(1, math.ceil((hi - lo) / cap))
        edges = np.linspace(lo, hi, n + 1)
        lefts.append(edges[:-1])
        rights.append(edges[1:])
        owner.append(np.full(n, i))
    lefts = np.concatenate(lefts)
    rights = np.concatenate(rights)
    owner = np.concatenate(owner)
    half = 0.5 * (rights - lefts)
    mid = 0.5 * (rights + lefts)

    # Outer nodes and the three rate combinations there.
    x = mid[:, None] + half[:, None] * _NODES7[None, :]
    rates_x = rates_fn(x.ravel()).reshape(x.shape + (3,))
    gz, gp, gm = rates_x[..., 0], rates_x[..., 1], rates_x[..., 2]
    r_inc = half * ((0.5 * (gp + gm + 4.0 * gz)) @ _WEIGHTS7)
    p_inc = half * ((gp + gm) @ _WEIGHTS7)

    p_left = np.concatenate([[0.0], np.cumsum(p_inc)])[:-1]

    # Nested panel integral for p at each outer node, then the q increment.
    inner_half = 0.5 * (x - lefts[:, None])
    inner_mid = 0.5 * (x + lefts[:, None])
    y = inner_mid[..., None] + inner_half[..., None] * _NODES5[None, None, :]
    rates_y = rates_fn(y.ravel()).reshape(y.shape + (3,))
    p_partial = inner_half * ((rates_y[..., 1] + rates_y[..., 2]) @ _WEIGHTS5)
    p_nodes = p_left[:, None] + p_partial
    q_inc = half * ((np.exp(p_nodes) * (gp - gm)) @ _WEIGHTS7)

    r_edges = np.concatenate([[0.0], np.cumsum(r_inc)])
    p_edges = np.concatenate([[0.0], np.cumsum(p_inc)])
    q_edges = np.concatenate([[0.0], np.cumsum(q_inc)])

    # Pick out the caller grid points (panel boundaries owned by each interval).
    idx = np.concatenate([[0], np.cumsum(np.bincount(owner))])
    return DampingIntegrals(grid, r_edges[idx], p_edges[idx], q_edges[idx])


def bloch_components(angles: InitialAngles, integrals: DampingIntegrals,
                     omega_s: float) -> np.ndarray:
    """Bloch vector samples (n, 3) from the damping integrals."""
    t = integrals.grid
    st, ct = math.sin(angles.theta), math.cos(angles.theta)
    envelope = np.exp(-integrals.r) * st
    phase = omega_s * t + angles.phi
    rx = envelope * np.cos(phase)
    ry = envelope * np.sin(phase)
    rz = np.exp(-integrals.p) * (ct + integrals.q)
    return np.column_stack([rx, ry, rz])


def _entropy_from_norm(norm):
    norm = np.asarray(norm, dtype=float)
    over = norm > 1.0 + NORM_REJECT
    if np.any(over):
        raise ValueError(
            f"Bloch norm {float(np.max(norm)):.6g} exceeds 1 + {NORM_REJECT}"
        )
    norm = np.clip(norm, 0.0, 1.0)
    v1 = 0.5 * (1.0 + norm)
    v2 = 0.5 * (1.0 - norm)
    out = np.zeros_like(norm)
    out -= np.where(v1 > 0, v1 * np.log(np.where(v1 > 0, v1, 1.0)), 0.0)
    out -= np.where(v2 > 0, v2 * np.log(np.where(v2 > 0, v2, 1.0)), 0.0)
    return out


def entropy(state):
    """Von Neumann entropy in nats of a qubit state.

    Accepts a QubitState, a 2x2 density matrix, or a Bloch 3-vector.
    Norms up to 1 + 1e-9 are clipped to 1; beyond 1 + 1e-6 is rejected.
    """
    arr = np.asarray(getattr(state, "matrix", state))
    if arr.shape == (2, 2):
        eigs = np.linalg.eigvalsh(arr)
        norm = abs(eigs[1] - eigs[0])
    elif arr.shape == (3,):
        norm = float(np.linalg.norm(arr))
    else:
        raise ValueError(f"expected a 2x2 matrix or Bloch 3-vector, got shape {arr.shape}")
    return float(_entropy_from_norm(norm))


def bloch_analytic(angles: InitialAngles, grid, ctx: Context,
                   rate_source=None) -> Trajectory:
    """Closed-form trajectory on ``grid``; the counterpart of the ODE engine.

    ``rate_source`` may be a :class:`chiralqubit.engine.PrecomputedGrid` to
    share the engine's interpolated rate table (keeping both paths'
    discretization errors commensurable); default is exact evaluation.
    """
    grid = np.asarray(grid, dtype=float)
    rates_fn = None
    if isinstance(rate_source, PrecomputedGrid):
        from .engine import EvolveConfig

        ev = RateEvaluator(
            ctx, EvolveConfig(t_max=float(grid[-1]), rate_source=rate_source),
            float(grid[-1]),
        )
        rates_fn = ev.rates_many
    integrals = damping_integrals(grid, ctx, rates_fn=rates_fn)
    bloch = bloch_components(angles, integrals, ctx.dressed.omega_s)

    norm = np.linalg.norm(bloch, axis=1)
    ent = _entropy_from_norm(norm)
    states = np.empty((grid.size, 2, 2), dtype=complex)
    states[:, 0, 0] = 0.5 * (1.0 + bloch[:, 2])
    states[:, 1, 1] = 0.5 * (1.0 - bloch[:, 2])
    states[:, 0, 1] = 0.5 * (bloch[:, 0] - 1j * bloch[:, 1])
    states[:, 1, 0] = np.conj(states[:, 0, 1])
    rates = rates_fn(grid) if rates_fn is not None else rate_profile(grid, ctx)
    metadata = {
        "angles": angles,
        "context": ctx,
        "max_bloch_norm": float(np.max(norm)),
        "rate_source": rate_source,
    }
    return Trajectory(grid, states, bloch, rates, ent, "Analytic", metadata)


def pointer_angle(ctx: Context, t_max: float = 20.0, resolution: int = 128,
                  time_samples: int = 4001) -> float:
    """Initial polar angle minimizing the time-averaged entropy over [0, t_max].

    The azimuth is fixed to 0 and ties are broken toward larger theta.
    ``resolution`` must be at least 64 grid points.
    """
    if resolution < 64:
        raise ValueError(f"theta grid resolution must be >= 64, got {resolution}")
    grid = np.linspace(0.0, t_max, time_samples)
    integrals = damping_integrals(grid, ctx)
    thetas = np.linspace(0.0, math.pi, resolution)

    transverse = np.exp(-integrals.r)[None, :] * np.sin(thetas)[:, None]
    rz = np.exp(-integrals.p)[None, :] * (
        np.cos(thetas)[:, None] + integrals.q[None, :]
    )
    norm = np.sqrt(transverse**2 + rz**2)
    ent = _entropy_from_norm(norm)
    averages = np.trapezoid(ent, grid, axis=1) / t_max
    idx = resolution - 1 - int(np.argmin(averages[::-1]))
    return float(thetas[idx])
