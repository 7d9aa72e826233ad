import json
import math
import time

import numpy as np
import pytest

from chiralqubit import ConfigError, PhysicsRegimeWarning, parse_config, run_config, run_figure
from chiralqubit.cli import main
from chiralqubit.scenarios import FIGURES


BASE_CONFIG = {
    "system": {"omega_s": 100.0, "delta_so_over_omega_s": 0.4, "drive": 500.0},
    "bath": {"u_sq": 0.1, "detuning": 10.0, "temperature": 1.0,
             "temperature_unit": "omega_s", "strategy": "resonant"},
    "run": {"t_max": 10.0, "samples": 1001, "theta": math.pi / 2.0, "phi": 0.0,
            "path": "both", "label": "fig2_det10"},
}


def deep_config(**run_updates):
    config = json.loads(json.dumps(BASE_CONFIG))
    config["run"].update(run_updates)
    return config


# --- configuration parsing ---------------------------------------------------

def test_parse_minimal_config():
    config = parse_config(deep_config())
    assert config.bath.omega0 == pytest.approx(510.0)
    assert config.bath.temperature == pytest.approx(100.0)  # omega_s units
    assert config.theta == pytest.approx(math.pi / 2.0)


def test_temperature_in_linewidth_units():
    raw = deep_config()
    raw["bath"]["temperature_unit"] = "lambda"
    config = parse_config(raw)
    assert config.bath.temperature == pytest.approx(1.0)


@pytest.mark.parametrize("mutate, fragment", [
    (lambda c: c.update({"extra": 1}), "<root>.extra"),
    (lambda c: c["system"].update({"omega": 1.0}), "system.omega"),
    (lambda c: c["bath"].update({"cutoff": 1.0}), "bath.cutoff"),
    (lambda c: c["run"].update({"tmax": 1.0}), "run.tmax"),
])
def test_unknown_keys_named(mutate, fragment):
    raw = deep_config()
    mutate(raw)
    with pytest.raises(ConfigError, match=fragment.replace(".", r"\.")):
        parse_config(raw)


def test_system_block_exclusivity():
    raw = deep_config()
    raw["system"]["omega_so"] = 540.0
    with pytest.raises(ConfigError, match="exactly one"):
        parse_config(raw)
    raw = deep_config()
    del raw["system"]["omega_s"]
    del raw["system"]["delta_so_over_omega_s"]
    with pytest.raises(ConfigError):
        parse_config(raw)


def test_missing_drive_rejected():
    raw = deep_config()
    del raw["system"]["drive"]
    with pytest.raises(ConfigError, match="system.drive"):
        parse_config(raw)


def test_bad_enums_rejected():
    raw = deep_config()
    raw["bath"]["strategy"] = "magic"
    with pytest.raises(ConfigError, match="strategy"):
        parse_config(raw)
    raw = deep_config(path="sideways")
    with pytest.raises(ConfigError, match="run.path"):
        parse_config(raw)


def test_regime_warning_not_fatal():
    raw = deep_config()
    raw["bath"]["u_sq"] = 50.0
    with pytest.warns(PhysicsRegimeWarning):
        config = parse_config(raw)
    assert config.bath.u_sq == 50.0


def test_quadrature_strategy_parse():
    raw = deep_config()
    raw["bath"]["strategy"] = "quadrature"
    raw["bath"]["ir_cutoff"] = 1e-5
    config = parse_config(raw)
    from chiralqubit import ExactQuadrature

    assert isinstance(config.bath.occupation, ExactQuadrature)
    assert config.bath.occupation.ir_cutoff == 1e-5


# --- figure scenarios ----------------------------------------------------------

def test_unknown_figure_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown figure"):
        run_figure("fig9", tmp_path)


def test_fig1_outputs(tmp_path):
    files = run_figure("fig1", tmp_path)
    names = sorted(p.name for p in files)
    assert "fig1_manifest.json" in names
    csvs = [n for n in names if n.endswith(".csv")]
    assert len(csvs) == 6
    body = (tmp_path / "fig1_gamma_z_det10.csv").read_text()
    header = body.splitlines()[0]
    assert header == "lambda_t,gamma_z_T0,gamma_z_T1"
    manifest = json.loads((tmp_path / "fig1_manifest.json").read_text())
    for run in manifest["runs"]:
        assert all(run["invariants"].values())


def test_fig3_deterministic(tmp_path):
    first = run_figure("fig3", tmp_path / "a")
    second = run_figure("fig3", tmp_path / "b")
    for fa, fb in zip(sorted(first), sorted(second)):
        if fa.suffix == ".csv":
            assert fa.read_bytes() == fb.read_bytes()


def test_config_reproduces_fig2_bit_identically(tmp_path):
    run_figure("fig2", tmp_path / "fig")
    config_path = tmp_path / "fig2_det10.json"
    config_path.write_text(json.dumps(BASE_CONFIG))
    run_config(config_path, tmp_path / "cfg")
    reference = (tmp_path / "fig" / "fig2_det10.csv").read_bytes()
    reproduced = (tmp_path / "cfg" / "fig2_det10.csv").read_bytes()
    assert reference == reproduced


def test_both_paths_csv_schema_and_deviation(tmp_path):
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(deep_config(samples=101, t_max=1.0,
                                                  label="probe")))
    files = run_config(config_path, tmp_path)
    body = (tmp_path / "probe.csv").read_text()
    header = body.splitlines()[0].split(",")
    assert header == [
        "lambda_t",
        "R_x_ode", "R_y_ode", "R_z_ode",
        "R_x_analytic", "R_y_analytic", "R_z_analytic",
        "gamma_z", "gamma_plus", "gamma_minus",
        "entropy_ode", "entropy_analytic",
    ]
    manifest = json.loads((tmp_path / "probe_manifest.json").read_text())
    assert manifest["runs"][0]["max_path_deviation"] <= 1e-6


def test_single_path_csv_schema(tmp_path):
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(deep_config(path="analytic", label="ana")))
    run_config(config_path, tmp_path)
    header = (tmp_path / "ana.csv").read_text().splitlines()[0]
    assert header == "lambda_t,R_x,R_y,R_z,gamma_z,gamma_plus,gamma_minus,entropy"


def test_closed_system_precession_config(tmp_path):
    config = {
        "system": {"omega_s": 5.0, "delta_so_over_omega_s": 0.4, "drive": 25.0},
        "bath": None,
        "run": {"t_max": 5.0, "samples": 501, "theta": math.pi / 3.0,
                "path": "analytic", "label": "closed"},
    }
    config_path = tmp_path / "closed.json"
    config_path.write_text(json.dumps(config))
    run_config(config_path, tmp_path)
    rows = np.loadtxt(tmp_path / "closed.csv", delimiter=",", skiprows=1)
    norms = np.linalg.norm(rows[:, 1:4], axis=1)
    assert np.max(np.abs(norms - 1.0)) < 1e-12
    assert np.all(rows[:, 4:7] == 0.0)


def test_manifest_references_every_csv(tmp_path):
    for name in ("fig1", "fig3"):
        files = run_figure(name, tmp_path / name)
        manifest = json.loads((tmp_path / name / f"{name}_manifest.json").read_text())
        csvs = {p.name for p in files if p.suffix == ".csv"}
        assert set(manifest["files"]) == csvs


def test_every_figure_completes_in_budget(tmp_path):
    for name in FIGURES:
        start = time.monotonic()
        run_figure(name, tmp_path / name)
        assert time.monotonic() - start < 60.0


def test_partial_output_removed_on_failure(tmp_path, monkeypatch):
    # Force a failure after the fig5 surface file has been written and
    # check that nothing is left behind.
    import chiralqubit.scenarios as scenarios_module

    def explode(*args, **kwargs):
        raise RuntimeError("injected failure")

    monkeypatch.setattr(scenarios_module, "pointer_angle", explode)
    with pytest.raises(RuntimeError, match="injected failure"):
        run_figure("fig5", tmp_path)
    assert list(tmp_path.iterdir()) == []


# --- command line ---------------------------------------------------------------

def test_cli_fig(tmp_path, capsys):
    assert main(["fig", "fig1", "--out", str(tmp_path)]) == 0
    assert "fig1_manifest.json" in capsys.readouterr().out


def test_cli_run_and_config_error(tmp_path, capsys):
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(deep_config(samples=51, t_max=0.5,
                                                  path="analytic", label="cli")))
    assert main(["run", "--config", str(config_path), "--out", str(tmp_path)]) == 0

    bad = dict(deep_config())
    bad["bath"]["strategy"] = "nope"
    config_path.write_text(json.dumps(bad))
    code = main(["run", "--config", str(config_path), "--out", str(tmp_path)])
    assert code == 2
    assert "bath.strategy" in capsys.readouterr().err


def test_cli_verify_kernels(capsys):
    assert main(["verify", "--suite", "kernels"]) == 0
    assert "PASS" in capsys.readouterr().out
