#!/usr/bin/env python3
"""Bloch-vector dynamics: closed-form solution against the ODE engine.

Demonstrates the two evolution paths on the same footing: the analytic
solution driven by cumulative damping integrals, and direct adaptive
integration of the time-local master equation.  Starting from the equal
dressed superposition (theta = pi/2), the z component drifts by the
channel asymmetry; a far-detuned bath transfers less coherence out of the
transverse plane, and a larger spin-orbit mixing ratio makes the drift
asymmetry stronger.

Run:  python demos/02_bloch_dynamics.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from chiralqubit import (
    EvolveConfig,
    InitialAngles,
    QubitState,
    bloch_analytic,
    evolve,
)
from chiralqubit.scenarios import figure_config

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

grid = np.linspace(0.0, 10.0, 1001)
angles = InitialAngles(np.pi / 2.0, 0.0)

fig, (ax_z, ax_env, ax_sweep) = plt.subplots(1, 3, figsize=(13, 4))

# Two bath-peak offsets: the cross-oracle pair.
for detuning, color in ((0.1, "tab:red"), (10.0, "k")):
    config = figure_config(detuning, 1.0)
    ctx = config.context()
    analytic = bloch_analytic(angles, grid, ctx)
    ode = evolve(QubitState.from_angles(angles.theta), EvolveConfig(t_max=10.0),
                 ctx, grid)
    deviation = np.max(np.abs(analytic.bloch - ode.bloch))
    print(f"offset {detuning:>4}: max |analytic - ODE| = {deviation:.2e}, "
          f"final R_z = {analytic.bloch[-1, 2]:+.3e}")
    ax_z.plot(grid, analytic.bloch[:, 2], color=color, lw=0.9,
              label=f"offset {detuning:g}")
    ax_env.plot(grid, np.hypot(analytic.bloch[:, 0], analytic.bloch[:, 1]),
                color=color, lw=0.9, label=f"offset {detuning:g}")

ax_z.set_xlabel(r"$\lambda t$"); ax_z.set_ylabel(r"$R_z$")
ax_z.set_title("z drift (both paths overlap)")
ax_z.legend(fontsize=8)
ax_env.set_xlabel(r"$\lambda t$"); ax_env.set_ylabel(r"$|R_\perp|$")
ax_env.set_title("transverse envelope")
ax_env.legend(fontsize=8)

# Mixing-ratio sweep at the nearly resonant offset.
for ratio in (0.1, 0.4, 0.7, 0.9):
    ctx = figure_config(0.1, 1.0, ratio=ratio).context()
    traj = bloch_analytic(angles, grid, ctx)
    avg = np.mean(np.abs(traj.bloch[:, 2]))
    ax_sweep.plot(grid, traj.bloch[:, 2], lw=0.9, label=f"ratio {ratio:g}")
    print(f"mixing ratio {ratio:g}: time-averaged |R_z| = {avg:.3e}")
ax_sweep.set_xlabel(r"$\lambda t$"); ax_sweep.set_ylabel(r"$R_z$")
ax_sweep.set_title("spin-orbit mixing sweep")
ax_sweep.legend(fontsize=8)

fig.tight_layout()
fig.savefig(OUT / "bloch_dynamics.png", dpi=150)
print(f"wrote {OUT / 'bloch_dynamics.png'}")
