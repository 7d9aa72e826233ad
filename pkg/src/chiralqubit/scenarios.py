"""Named figure scenarios, config-file runs, CSV emission, run manifests.

All inputs are dimensionless groups scaled by the bath linewidth (lam = 1
internally): omega_s/lam, delta_so/omega_s, drive/lam, u^2/lam, the bath
peak offset (omega0 - drive)/lam, lam * t.  Temperature carries an explicit
unit convention: "omega_s" (default, T = 1 means k_B T = omega_s) or
"lambda".

Scenario defaults that the underlying parameter groups do not pin down
(recorded in every manifest):

* coupling weight u^2 / lam = 0.1,
* drive frequency = 5 * omega_s, which keeps every occupation channel
  frequency positive and far enough above k_B T that a far-detuned bath is
  temperature-insensitive,
* initial Bloch angles theta = pi/2, phi = 0 (equal dressed superposition).

Output files are deterministic: identical configs produce byte-identical
CSV bodies (manifests additionally record wall time).
"""

from __future__ import annotations

from dataclasses import dataclass
import json
import math
import time
import warnings
from pathlib import Path

import numpy as np

from ._version import __version__
from .bath import BathSpec, Context, ExactQuadrature, ResonantApprox, kernels, rate_profile
from .engine import EvolveConfig, OnTheFly, PrecomputedGrid, Trajectory, evolve
from .model import QubitState, SystemParams, dressed_params, system_from_dressed_ratio
from .solution import InitialAngles, bloch_analytic, damping_integrals, pointer_angle

LAMBDA = 1.0
DEFAULT_OMEGA_S = 100.0
DEFAULT_DRIVE_RATIO = 5.0       # drive = 5 * omega_s
DEFAULT_U_SQ = 0.1
DEFAULT_DELTA_RATIO = 0.4
FIG3_RATIOS = (0.1, 0.4, 0.7, 0.9)
FIG5_DETUNINGS = (0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0)
SURFACE_THETA_POINTS = 128
REGIME_RATIO_LIMIT = 0.1        # warn when u^2 / omega_s exceeds this

FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5")

_FMT = "%.17g"


class ConfigError(ValueError):
    """Configuration rejected; the message names the offending key."""


class PhysicsRegimeWarning(UserWarning):
    """The requested coupling strains the weak-coupling premise."""


@dataclass
class ScenarioConfig:
    """Fully resolved parameters of one run."""

    system: SystemParams
    bath: BathSpec | None
    theta: float
    phi: float
    t_max: float
    samples: int
    path: str
    include_nl: bool
    include_lamb_shift: bool
    rtol: float
    atol: float
    rate_grid_spacing: float | None
    emit_rates: bool
    emit_entropy: bool
    label: str
    groups: dict

    def context(self) -> Context:
        return Context(dressed_params(self.system), self.bath, self.system.drive)


def _require_keys(block: dict, allowed: set, where: str):
    for key in block:
        if key not in allowed:
            raise ConfigError(f"unknown key '{where}.{key}'")


def _get(block: dict, key: str, default, where: str, kind):
    value = block.get(key, default)
    if value is None:
        return None
    try:
        value = kind(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"key '{where}.{key}' has invalid value {value!r}") from exc
    if kind is float and not math.isfinite(value):
        raise ConfigError(f"key '{where}.{key}' must be finite, got {value!r}")
    return value


def parse_config(data: dict) -> ScenarioConfig:
    """Validate and resolve a raw configuration mapping."""
    if not isinstance(data, dict):
        raise ConfigError("configuration root must be a mapping")
    _require_keys(data, {"system", "bath", "run"}, "<root>")
    system_block = data.get("system")
    if not isinstance(system_block, dict):
        raise ConfigError("missing or invalid 'system' block")
    run_block = data.get("run", {})
    if not isinstance(run_block, dict):
        raise ConfigError("'run' block must be a mapping")
    bath_block = data.get("bath")
    if bath_block is not None and not isinstance(bath_block, dict):
        raise ConfigError("'bath' block must be a mapping or null")

    _require_keys(
        system_block,
        {"omega_s", "delta_so_over_omega_s", "omega_so", "d_eps", "drive", "alpha"},
        "system",
    )
    drive = _get(system_block, "drive", None, "system", float)
    if drive is None:
        raise ConfigError("key 'system.drive' is required")
    dressed_style = "omega_s" in system_block or "delta_so_over_omega_s" in system_block
    raw_style = "omega_so" in system_block or "d_eps" in system_block
    if dressed_style == raw_style:
        raise ConfigError(
            "system block needs exactly one of {omega_s + delta_so_over_omega_s} "
            "or {omega_so + d_eps}"
        )
    if dressed_style:
        omega_s = _get(system_block, "omega_s", None, "system", float)
        ratio = _get(system_block, "delta_so_over_omega_s", None, "system", float)
        if omega_s is None or ratio is None:
            raise ConfigError("keys 'system.omega_s' and 'system.delta_so_over_omega_s' go together")
        system = system_from_dressed_ratio(omega_s, ratio, drive)
    else:
        omega_so = _get(system_block, "omega_so", None, "system", float)
        d_eps = _get(system_block, "d_eps", None, "system", float)
        if omega_so is None or d_eps is None:
            raise ConfigError("keys 'system.omega_so' and 'system.d_eps' go together")
        system = SystemParams(omega_so=omega_so, drive=drive,
                              d_eps=d_eps, alpha=float(system_block.get("alpha", 0.0)))

    dressed = dressed_params(system)
    bath = None
    groups_bath = {}
    if bath_block is not None:
        _require_keys(
            bath_block,
            {"u_sq", "detuning", "temperature", "temperature_unit", "strategy",
             "ir_cutoff", "omega_max"},
            "bath",
        )
        u_sq = _get(bath_block, "u_sq", DEFAULT_U_SQ, "bath", float)
        detuning = _get(bath_block, "detuning", None, "bath", float)
        if detuning is None:
            raise ConfigError("key 'bath.detuning' is required")
        temperature = _get(bath_block, "temperature", 0.0, "bath", float)
        unit = bath_block.get("temperature_unit", "omega_s")
        if unit not in ("omega_s", "lambda"):
            raise ConfigError(f"key 'bath.temperature_unit' must be 'omega_s' or 'lambda', got {unit!r}")
        t_abs = temperature * (dressed.omega_s if unit == "omega_s" else LAMBDA)
        strategy_name = bath_block.get("strategy", "resonant")
        if strategy_name == "resonant":
            strategy = ResonantApprox()
        elif strategy_name == "quadrature":
            strategy = ExactQuadrature(
                ir_cutoff=_get(bath_block, "ir_cutoff", 1e-6 * LAMBDA, "bath", float),
                omega_max=_get(bath_block, "omega_max", None, "bath", float),
            )
        else:
            raise ConfigError(
                f"key 'bath.strategy' must be 'resonant' or 'quadrature', got {strategy_name!r}"
            )
        bath = BathSpec(
            u_sq=u_sq,
            omega0=drive + detuning * LAMBDA,
            temperature=t_abs,
            lam=LAMBDA,
            occupation=strategy,
        )
        groups_bath = {
            "u_sq": u_sq,
            "detuning": detuning,
            "temperature": temperature,
            "temperature_unit": unit,
            "temperature_absolute": t_abs,
        }

    _require_keys(
        run_block,
        {"t_max", "samples", "theta", "phi", "path", "include_nl", "include_lamb_shift",
         "rtol", "atol", "rate_grid_spacing", "emit_rates", "emit_entropy", "label"},
        "run",
    )
    path = run_block.get("path", "analytic")
    if path not in ("ode", "analytic", "both"):
        raise ConfigError(f"key 'run.path' must be 'ode', 'analytic', or 'both', got {path!r}")
    t_max = _get(run_block, "t_max", 10.0, "run", float)
    samples = _get(run_block, "samples", 1001, "run", int)
    if not t_max > 0:
        raise ConfigError(f"key 'run.t_max' must be positive, got {t_max}")
    if samples < 2:
        raise ConfigError(f"key 'run.samples' must be at least 2, got {samples}")

    config = ScenarioConfig(
        system=system,
        bath=bath,
        theta=_get(run_block, "theta", math.pi / 2.0, "run", float),
        phi=_get(run_block, "phi", 0.0, "run", float),
        t_max=t_max,
        samples=samples,
        path=path,
        include_nl=bool(run_block.get("include_nl", False)),
        include_lamb_shift=bool(run_block.get("include_lamb_shift", False)),
        rtol=_get(run_block, "rtol", 1e-10, "run", float),
        atol=_get(run_block, "atol", 1e-12, "run", float),
        rate_grid_spacing=_get(run_block, "rate_grid_spacing", None, "run", float),
        emit_rates=bool(run_block.get("emit_rates", True)),
        emit_entropy=bool(run_block.get("emit_entropy", True)),
        label=str(run_block.get("label", "run")),
        groups={
            "omega_s": dressed.omega_s,
            "delta_so_over_omega_s": dressed.delta_so / dressed.omega_s,
            "drive": drive,
            "lambda": LAMBDA,
            **groups_bath,
        },
    )
    _check_regime(config)
    return config


def _check_regime(config: ScenarioConfig) -> list:
    notes = []
    if config.bath is not None:
        dressed = dressed_params(config.system)
        ratio = config.bath.u_sq / dressed.omega_s
        if ratio > REGIME_RATIO_LIMIT:
            message = (
                f"u_sq/omega_s = {ratio:.3g} exceeds {REGIME_RATIO_LIMIT}; the "
                f"weak-coupling expansion may be unreliable"
            )
            warnings.warn(message, PhysicsRegimeWarning, stacklevel=3)
            notes.append(message)
    return notes


def _format_row(values) -> str:
    return ",".join(_FMT % v for v in values)


def _write_csv(path: Path, header: list, rows: np.ndarray):
    lines = [",".join(header)]
    lines.extend(_format_row(row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _check_trajectory_invariants(traj: Trajectory) -> dict:
    traces = np.einsum("nii->n", traj.states).real
    eigs = np.linalg.eigvalsh(traj.states)
    purity = np.einsum("nij,nji->n", traj.states, traj.states).real
    herm = traj.metadata.get("max_hermiticity_correction", 0.0)
    norms = np.linalg.norm(traj.bloch, axis=1)
    return {
        "trace_unit": bool(np.max(np.abs(traces - 1.0)) <= 1e-9),
        "hermitian": bool(herm <= 1e-10),
        "positive": bool(eigs.min() >= -1e-9),
        "purity_bounded": bool(purity.max() <= 1.0 + 1e-9),
        "bloch_norm_bounded": bool(norms.max() <= 1.0 + 1e-9),
    }


def execute_scenario(config: ScenarioConfig, out_dir: Path, stem: str):
    """Run one scenario; returns (written files, manifest fragment)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ctx = config.context()
    grid = np.linspace(0.0, config.t_max, config.samples)
    angles = InitialAngles(config.theta, config.phi)

    rate_source = (
        PrecomputedGrid(config.rate_grid_spacing)
        if config.rate_grid_spacing is not None
        else OnTheFly()
    )
    trajectories = {}
    if config.path in ("analytic", "both"):
        trajectories["analytic"] = bloch_analytic(
            angles, grid, ctx,
            rate_source=rate_source if config.rate_grid_spacing is not None else None,
        )
    if config.path in ("ode", "both"):
        evolve_cfg = EvolveConfig(
            t_max=config.t_max,
            rtol=config.rtol,
            atol=config.atol,
            include_nl=config.include_nl,
            include_lamb_shift=config.include_lamb_shift,
            rate_source=rate_source,
        )
        trajectories["ode"] = evolve(
            QubitState.from_angles(config.theta, config.phi), evolve_cfg, ctx, grid
        )

    invariants = {}
    for name, traj in trajectories.items():
        for check, ok in _check_trajectory_invariants(traj).items():
            invariants[f"{name}_{check}"] = ok

    max_deviation = None
    if config.path == "both":
        max_deviation = float(
            np.max(np.abs(trajectories["ode"].bloch - trajectories["analytic"].bloch))
        )

    header = ["lambda_t"]
    columns = [grid]
    if config.path == "both":
        for name in ("ode", "analytic"):
            for i, comp in enumerate(("R_x", "R_y", "R_z")):
                header.append(f"{comp}_{name}")
                columns.append(trajectories[name].bloch[:, i])
    else:
        traj = trajectories[config.path]
        for i, comp in enumerate(("R_x", "R_y", "R_z")):
            header.append(comp)
            columns.append(traj.bloch[:, i])
    if config.emit_rates:
        any_traj = next(iter(trajectories.values()))
        for i, comp in enumerate(("gamma_z", "gamma_plus", "gamma_minus")):
            header.append(comp)
            columns.append(any_traj.rates[:, i])
    if config.emit_entropy:
        if config.path == "both":
            header.extend(["entropy_ode", "entropy_analytic"])
            columns.append(trajectories["ode"].entropy)
            columns.append(trajectories["analytic"].entropy)
        else:
            header.append("entropy")
            columns.append(trajectories[config.path].entropy)

    csv_path = out_dir / f"{stem}.csv"
    _write_csv(csv_path, header, np.column_stack(columns))

    fragment = {
        "label": config.label,
        "stem": stem,
        "parameters": dict(config.groups, theta=config.theta, phi=config.phi,
                           t_max=config.t_max, samples=config.samples,
                           path=config.path, include_nl=config.include_nl,
                           include_lamb_shift=config.include_lamb_shift),
        "tolerances": {"rtol": config.rtol, "atol": config.atol},
        "occupation_strategy": _strategy_record(config.bath),
        "rate_grid_spacing": config.rate_grid_spacing,
        "invariants": invariants,
        "max_path_deviation": max_deviation,
        "files": [csv_path.name],
    }
    return [csv_path], fragment


def _strategy_record(bath: BathSpec | None) -> dict:
    if bath is None:
        return {"kind": "closed_system"}
    strategy = bath.occupation
    if isinstance(strategy, ExactQuadrature):
        return {
            "kind": "quadrature",
            "ir_cutoff": strategy.ir_cutoff,
            "omega_max": strategy.omega_max,
            "abs_tol_factor": strategy.abs_tol_factor,
            "rel_tol": strategy.rel_tol,
        }
    return {"kind": "resonant"}


def _write_manifest(out_dir: Path, name: str, fragments: list, files: list,
                    wall_time: float, warnings_seen: list) -> Path:
    manifest = {
        "tool": "chiralqubit",
        "version": __version__,
        "scenario": name,
        "runs": fragments,
        "files": [f.name for f in files],
        "warnings": warnings_seen,
        "wall_time_s": wall_time,
    }
    path = Path(out_dir) / f"{name}_manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8", newline="\n")
    return path


def figure_config(detuning: float, temperature: float, *, ratio: float = DEFAULT_DELTA_RATIO,
                  theta: float = math.pi / 2.0, t_max: float = 10.0, samples: int = 1001,
                  path: str = "analytic", label: str = "figure",
                  omega_s: float = DEFAULT_OMEGA_S) -> ScenarioConfig:
    """A scenario at the figure-family defaults with the given knobs changed."""
    drive = DEFAULT_DRIVE_RATIO * omega_s
    return parse_config({
        "system": {"omega_s": omega_s, "delta_so_over_omega_s": ratio, "drive": drive},
        "bath": {"u_sq": DEFAULT_U_SQ, "detuning": detuning, "temperature": temperature,
                 "temperature_unit": "omega_s", "strategy": "resonant"},
        "run": {"t_max": t_max, "samples": samples, "theta": theta, "phi": 0.0,
                "path": path, "label": label},
    })


def fig2_configs() -> list:
    """The two cross-oracle runs: both detunings, T = 1, theta = pi/2."""
    return [
        figure_config(10.0, 1.0, path="both", label="fig2_det10"),
        figure_config(0.1, 1.0, path="both", label="fig2_det0.1"),
    ]


def _apply_overrides(config: ScenarioConfig, overrides: dict) -> ScenarioConfig:
    from dataclasses import replace

    cfg = config
    if overrides.get("tolerance") is not None:
        tol = float(overrides["tolerance"])
        cfg = replace(cfg, rtol=tol, atol=tol * 1e-2)
    if overrides.get("path") is not None:
        cfg = replace(cfg, path=overrides["path"])
    if overrides.get("include_nl"):
        cfg = replace(cfg, include_nl=True)
    if overrides.get("include_lamb_shift"):
        cfg = replace(cfg, include_lamb_shift=True)
    if overrides.get("strategy") == "quadrature" and cfg.bath is not None:
        cfg = replace(cfg, bath=replace(cfg.bath, occupation=ExactQuadrature()))
    return cfg


def run_figure(name: str, out_dir, **overrides) -> list:
    """Reproduce one named figure scenario; returns the written files.

    Partial output is removed if the run fails midway.
    """
    if name not in FIGURES:
        raise ValueError(f"unknown figure {name!r}; choose from {FIGURES}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list = []
    start = time.monotonic()
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", PhysicsRegimeWarning)
            fragments = _run_figure_inner(name, out_dir, written, overrides)
            notes = [str(w.message) for w in caught if issubclass(w.category, PhysicsRegimeWarning)]
        manifest = _write_manifest(out_dir, name, fragments, written,
                                   time.monotonic() - start, notes)
        written.append(manifest)
        return written
    except Exception:
        for path in written:
            Path(path).unlink(missing_ok=True)
        raise


def _run_figure_inner(name: str, out_dir: Path, written: list, overrides: dict) -> list:
    if name == "fig1":
        return _run_fig1(out_dir, written)
    if name == "fig2":
        configs = fig2_configs()
    elif name == "fig3":
        configs = [
            figure_config(0.1, 1.0, ratio=r, label=f"fig3_ratio{r:g}")
            for r in FIG3_RATIOS
        ]
    elif name == "fig4":
        return _run_entropy_figure(out_dir, written, temperature=0.0, detuning=0.1,
                                   stem="fig4", overrides=overrides)
    elif name == "fig5":
        return _run_fig5(out_dir, written, overrides)
    fragments = []
    for config in configs:
        config = _apply_overrides(config, overrides)
        files, fragment = execute_scenario(config, out_dir, config.label)
        written.extend(files)
        fragments.append(fragment)
    return fragments


def _run_fig1(out_dir: Path, written: list) -> list:
    omega_s = DEFAULT_OMEGA_S
    grid = np.linspace(0.0, 20.0, 2001)
    fragments = []
    for det in (0.1, 10.0):
        profiles = {}
        for temp in (0.0, 1.0):
            config = figure_config(det, temp, t_max=20.0, samples=2001,
                                   label=f"fig1_det{det:g}_T{temp:g}")
            profiles[temp] = rate_profile(grid, config.context())
        ctx0 = figure_config(det, 0.0, label="probe").context()
        probe = kernels(1.0, 0, ctx0.dressed, ctx0.bath, ctx0.drive)[0]
        invariants = {
            "rates_finite": bool(np.all(np.isfinite(profiles[0.0]))
                                 and np.all(np.isfinite(profiles[1.0]))),
            "zero_temperature_absorption": probe == 0.0,
        }
        for idx, rate in enumerate(("gamma_z", "gamma_plus", "gamma_minus")):
            csv_path = out_dir / f"fig1_{rate}_det{det:g}.csv"
            rows = np.column_stack([grid, profiles[0.0][:, idx], profiles[1.0][:, idx]])
            _write_csv(csv_path, ["lambda_t", f"{rate}_T0", f"{rate}_T1"], rows)
            written.append(csv_path)
        config = figure_config(det, 1.0, t_max=20.0, samples=2001, label="fig1")
        fragments.append({
            "label": f"fig1_det{det:g}",
            "parameters": dict(config.groups, t_max=20.0, samples=2001,
                               temperatures=[0.0, 1.0]),
            "tolerances": {},
            "occupation_strategy": _strategy_record(config.bath),
            "invariants": invariants,
            "files": [f"fig1_{rate}_det{det:g}.csv"
                      for rate in ("gamma_z", "gamma_plus", "gamma_minus")],
        })
    return fragments


def _entropy_surface(ctx: Context, t_max: float, time_points: int, thetas: np.ndarray):
    grid = np.linspace(0.0, t_max, time_points)
    integrals = damping_integrals(grid, ctx)
    transverse = np.exp(-integrals.r)[None, :] * np.sin(thetas)[:, None]
    rz = np.exp(-integrals.p)[None, :] * (np.cos(thetas)[:, None] + integrals.q[None, :])
    norm = np.sqrt(transverse**2 + rz**2)
    from .solution import _entropy_from_norm

    return grid, _entropy_from_norm(norm)


def _run_entropy_figure(out_dir: Path, written: list, *, temperature: float,
                        detuning: float, stem: str, overrides: dict) -> list:
    thetas = np.linspace(0.0, math.pi, SURFACE_THETA_POINTS)
    base = figure_config(detuning, temperature, ratio=0.9, t_max=20.0,
                         samples=401, label=f"{stem}_surface")
    grid, surface = _entropy_surface(base.context(), 20.0, 401, thetas)
    rows = np.column_stack([
        np.repeat(thetas, grid.size),
        np.tile(grid, thetas.size),
        surface.ravel(),
    ])
    surface_path = out_dir / f"{stem}_surface.csv"
    _write_csv(surface_path, ["theta", "lambda_t", "entropy"], rows)
    written.append(surface_path)

    fragments = [{
        "label": f"{stem}_surface",
        "parameters": dict(base.groups, t_max=20.0, time_samples=401,
                           theta_points=SURFACE_THETA_POINTS),
        "tolerances": {},
        "occupation_strategy": _strategy_record(base.bath),
        "invariants": {"entropy_finite": bool(np.all(np.isfinite(surface)))},
        "files": [surface_path.name],
    }]
    for theta, tag in ((0.0, "theta0"), (math.pi / 2.0, "theta_half_pi"), (math.pi, "theta_pi")):
        config = figure_config(detuning, temperature, ratio=0.9, theta=theta,
                               t_max=20.0, samples=2001, label=f"{stem}_{tag}")
        config = _apply_overrides(config, overrides)
        files, fragment = execute_scenario(config, out_dir, config.label)
        written.extend(files)
        fragments.append(fragment)
    return fragments


def _run_fig5(out_dir: Path, written: list, overrides: dict) -> list:
    fragments = _run_entropy_figure(out_dir, written, temperature=1.0, detuning=10.0,
                                    stem="fig5", overrides=overrides)
    rows = []
    for det in FIG5_DETUNINGS:
        config = figure_config(det, 1.0, ratio=0.9, label="fig5_pointer")
        theta_p = pointer_angle(config.context(), t_max=20.0,
                                resolution=SURFACE_THETA_POINTS)
        rows.append((det, theta_p))
    pointer_path = out_dir / "fig5_pointer.csv"
    _write_csv(pointer_path, ["detuning", "theta_p"], np.array(rows))
    written.append(pointer_path)
    config = figure_config(FIG5_DETUNINGS[0], 1.0, ratio=0.9, label="fig5_pointer")
    fragments.append({
        "label": "fig5_pointer",
        "parameters": dict(config.groups, detunings=list(FIG5_DETUNINGS),
                           theta_points=SURFACE_THETA_POINTS, t_max=20.0),
        "tolerances": {},
        "occupation_strategy": _strategy_record(config.bath),
        "invariants": {"theta_p_in_range": bool(all(0.0 <= r[1] <= math.pi for r in rows))},
        "files": [pointer_path.name],
    })
    return fragments


def run_config(config_path, out_dir, **overrides) -> list:
    """Run a free-form configuration file; returns the written files."""
    config_path = Path(config_path)
    try:
        data = json.loads(config_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {config_path} is not valid JSON: {exc}") from exc
    config = parse_config(data)
    config = _apply_overrides(config, overrides)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list = []
    start = time.monotonic()
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", PhysicsRegimeWarning)
            notes = _check_regime(config)
            files, fragment = execute_scenario(config, out_dir, config.label)
            written.extend(files)
            notes.extend(str(w.message) for w in caught
                         if issubclass(w.category, PhysicsRegimeWarning))
        manifest = _write_manifest(out_dir, config.label, [fragment], written,
                                   time.monotonic() - start, sorted(set(notes)))
        written.append(manifest)
        return written
    except Exception:
        for path in written:
            Path(path).unlink(missing_ok=True)
        raise
