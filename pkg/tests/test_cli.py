"""CLI and runner: artifacts, determinism, replay fidelity, exit codes."""

import csv
import json
import subprocess
import sys

import numpy as np

from influence_dyn import (
    AppraisalMap,
    OpinionVector,
    SimplexVector,
    parse_config,
    resolve,
    run_experiment,
    step,
)
from influence_dyn.cli import main


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def power_doc(max_iterations=1000):
    return {
        "network": {"rows": [[0, 1, 0], [0, 0, 1], [1, 0, 0]]},
        "schedule": {"regime": "averaging", "a": {"family": "identity"}},
        "initial_appraisals": [0.6, 0.2, 0.2],
        "run": {
            "mode": "power",
            "method": "reduced",
            "tol": 1e-10,
            "max_iterations": max_iterations,
        },
    }


def issue_doc():
    return {
        "network": {"rows": [[0, 1, 0], [0, 0, 1], [1, 0, 0]]},
        "schedule": {"regime": "averaging", "a": {"family": "constant", "value": 0.5}},
        "initial_opinions": [0, 0.5, 1],
        "run": {"mode": "issue", "tol": 1e-10, "max_iterations": 10_000},
    }


def read_rows(path):
    with open(path, newline="") as handle:
        return list(csv.reader(handle))


def summary_dict(out_dir):
    header, values = read_rows(out_dir / "summary.csv")
    return dict(zip(header, values))


def test_power_run_writes_the_expected_artifacts(tmp_path):
    config = write_config(tmp_path, power_doc())
    out = tmp_path / "out"
    assert main(["run", "--config", str(config), "--out", str(out)]) == 0
    rows = read_rows(out / "trajectory.csv")
    assert rows[0] == ["s", "agent_1", "agent_2", "agent_3"]
    first_step = [float(v) for v in rows[2][1:]]
    assert np.abs(np.array(first_step) - np.array([0.5, 0.25, 0.25])).max() <= 1e-9
    summary = summary_dict(out)
    assert summary["mode"] == "power"
    assert summary["converged"] == "true"
    assert float(summary["residual"]) <= 1e-10
    assert abs(float(summary["agent_1"]) - 1.0 / 3.0) <= 1e-6
    instance = dict((row[0], row[1]) for row in read_rows(out / "instance.csv")[1:])
    assert instance["regime"] == "averaging"
    assert instance["network_source"] == "explicit"
    assert json.loads(instance["p_row_1"]) == [0.0, 1.0, 0.0]


def test_issue_run_reports_the_consensus(tmp_path):
    config = write_config(tmp_path, issue_doc())
    out = tmp_path / "out"
    assert main(["run", "--config", str(config), "--out", str(out)]) == 0
    rows = read_rows(out / "trajectory.csv")
    assert rows[0][0] == "t"
    summary = summary_dict(out)
    assert summary["converged"] == "true"
    consensus = np.array([float(summary[f"agent_{i + 1}"]) for i in range(3)])
    assert np.abs(consensus - 0.5).max() <= 1e-9


def test_equilibrium_mode_certifies_the_fixed_point(tmp_path):
    doc = power_doc()
    doc["run"]["mode"] = "equilibrium"
    doc["run"]["certification_tol"] = 1e-8
    config = write_config(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["run", "--config", str(config), "--out", str(out)]) == 0
    summary = summary_dict(out)
    assert summary["converged"] == "true"
    assert float(summary["residual"]) <= 1e-8


def test_nonconverged_run_still_exits_zero(tmp_path):
    config = write_config(tmp_path, power_doc(max_iterations=3))
    out = tmp_path / "out"
    assert main(["run", "--config", str(config), "--out", str(out)]) == 0
    summary = summary_dict(out)
    assert summary["converged"] == "false"
    assert summary["iterations"] == "3"
    assert summary["agent_1"] == ""


def test_identical_configs_produce_identical_bytes(tmp_path):
    doc = {
        "network": {"random": {"n": 6, "edge_density": 0.4, "seed": 2024}},
        "schedule": {"regime": "averaging", "a": {"family": "identity"}},
        "run": {"mode": "power", "method": "reduced", "max_iterations": 500},
    }
    config = write_config(tmp_path, doc)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", str(config), "--out", str(out_a)]) == 0
    assert main(["run", "--config", str(config), "--out", str(out_b)]) == 0
    for name in ("instance.csv", "trajectory.csv", "summary.csv"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_seed_override_changes_the_instance(tmp_path):
    doc = {
        "network": {"random": {"n": 5, "edge_density": 0.5, "seed": 1}},
        "schedule": {"regime": "averaging", "a": {"family": "identity"}},
        "run": {"mode": "power", "method": "reduced", "max_iterations": 500},
    }
    config = write_config(tmp_path, doc)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", str(config), "--out", str(out_a)]) == 0
    assert main(
        ["run", "--config", str(config), "--out", str(out_b), "--seed", "2"]
    ) == 0
    assert (out_a / "instance.csv").read_bytes() != (out_b / "instance.csv").read_bytes()


def test_mode_flag_overrides_the_config(tmp_path):
    config = write_config(tmp_path, power_doc())
    out = tmp_path / "out"
    assert main(
        ["run", "--config", str(config), "--out", str(out), "--mode", "equilibrium"]
    ) == 0
    assert summary_dict(out)["mode"] == "equilibrium"


def test_trajectory_rows_replay_through_the_step(tmp_path):
    doc = power_doc()
    config_obj = parse_config(doc)
    out = tmp_path / "out"
    run_experiment(config_obj, out)
    resolved = resolve(config_obj)
    amap = AppraisalMap(resolved.network, resolved.schedule, resolved.run.method)
    rows = read_rows(out / "trajectory.csv")[1:]
    states = [np.array([float(v) for v in row[1:]]) for row in rows]
    for before, after in zip(states, states[1:]):
        replay = amap.step(SimplexVector(before))
        assert np.abs(replay.entries - after).max() <= 1e-12


def test_issue_trajectory_rows_replay_through_the_step(tmp_path):
    config_obj = parse_config(issue_doc())
    out = tmp_path / "out"
    run_experiment(config_obj, out)
    resolved = resolve(config_obj)
    rows = read_rows(out / "trajectory.csv")[1:]
    states = [np.array([float(v) for v in row[1:]]) for row in rows]
    y0 = OpinionVector(states[0])
    for before, after in zip(states, states[1:]):
        replay = step(
            OpinionVector(before), y0, resolved.network, resolved.schedule,
            resolved.initial_appraisals,
        )
        assert np.abs(replay.entries - after).max() <= 1e-12


def test_io_failure_exits_one(tmp_path, capsys):
    config = write_config(tmp_path, issue_doc())
    blocker = tmp_path / "blocked"
    blocker.write_text("not a directory")
    assert main(["run", "--config", str(config), "--out", str(blocker)]) == 1
    assert "error" in capsys.readouterr().err


def test_validate_accepts_and_rejects(tmp_path, capsys):
    good = write_config(tmp_path, power_doc(), "good.json")
    assert main(["validate", "--config", str(good)]) == 0
    assert capsys.readouterr().out.strip() == "ok"

    doc = power_doc()
    doc["run"]["mode"] = "sideways"
    bad = write_config(tmp_path, doc, "bad.json")
    assert main(["validate", "--config", str(bad)]) == 2
    assert "run.mode" in capsys.readouterr().err


def test_unparseable_json_exits_two(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["validate", "--config", str(broken)]) == 2
    assert "not valid JSON" in capsys.readouterr().err


def test_gen_network_prints_csv_rows(capsys):
    assert main(["gen-network", "--n", "3", "--density", "0", "--seed", "7"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    matrix = np.array([[float(v) for v in line.split(",")] for line in lines])
    assert matrix.shape == (3, 3)
    assert sorted(matrix[matrix > 0]) == [1.0, 1.0, 1.0]


def test_gen_network_validates_arguments(capsys):
    assert main(["gen-network", "--n", "1", "--density", "0.5", "--seed", "7"]) == 1
    assert "n must be" in capsys.readouterr().err


def test_console_entry_point_runs(tmp_path):
    config = write_config(tmp_path, issue_doc())
    out = tmp_path / "out"
    proc = subprocess.run(
        [sys.executable, "-m", "influence_dyn.cli", "run",
         "--config", str(config), "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (out / "summary.csv").exists()


def test_log_level_env_is_honored(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("INFLUENCE_DYN_LOG", "nonsense")
    config = write_config(tmp_path, issue_doc())
    assert main(["validate", "--config", str(config)]) == 0
    assert "INFLUENCE_DYN_LOG" in capsys.readouterr().err
