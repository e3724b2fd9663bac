"""Experiment execution and deterministic CSV artifacts.

Each run writes three files into the output directory:

* instance.csv    key/value record of the resolved instance (network rows,
                  schedule parameters, seeds, run settings);
* trajectory.csv  one row per index step; the index column is named `t` for
                  within-issue opinion paths and `s` for issue-indexed
                  appraisal paths, and downstream tools key off that name;
* summary.csv     converged flag, stopping residual, iteration count and the
                  final consensus/equilibrium vector (blank if none).

All floats are written with 17 significant digits so values round-trip
exactly; identical configurations therefore produce byte-identical files.
Non-convergence is an ordinary recorded outcome, not an error.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, ResolvedExperiment, resolve
from .dynamics import simulate_issue
from .power import AppraisalMap, check_equilibrium, evolve

log = logging.getLogger("influence_dyn")

_FLOAT_FMT = ".17g"


def _fmt(value: float) -> str:
    return format(float(value), _FLOAT_FMT)


def _json_floats(values) -> str:
    return json.dumps([float(v) for v in values])


def _write_csv(path: Path, rows) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerows(rows)


def _instance_rows(resolved: ResolvedExperiment) -> list[list[str]]:
    run = resolved.run
    sched = resolved.schedule
    rows: list[list[str]] = [["field", "value"]]
    rows.append(["mode", run.mode])
    rows.append(["method", run.method.value])
    rows.append(["n", str(resolved.network.n)])
    rows.append(["network_source", "random" if resolved.network_seed is not None else "explicit"])
    rows.append(["network_seed", "" if resolved.network_seed is None else str(resolved.network_seed)])
    rows.append(["edge_density", "" if resolved.edge_density is None else _fmt(resolved.edge_density)])
    rows.append(["regime", sched.regime.value])
    rows.append(["permutation", json.dumps(list(sched.z_perm))])
    for label, maps in (("a", sched.a_maps), ("b", sched.b_maps)):
        for i, m in enumerate(maps):
            rows.append([
                f"{label}_map_{i + 1}",
                json.dumps({"family": m.family, "coefficients": list(m.coeffs)}),
            ])
    for i, row in enumerate(resolved.network.entries):
        rows.append([f"p_row_{i + 1}", _json_floats(row)])
    rows.append(["initial_opinions", _json_floats(resolved.initial_opinions.entries)])
    rows.append(["initial_appraisals", _json_floats(resolved.initial_appraisals.entries)])
    rows.append(["tol", _fmt(run.tol)])
    rows.append(["max_iterations", str(run.max_iterations)])
    rows.append(["certification_tol", _fmt(run.certification_tol)])
    return rows


def run_experiment(
    config: ExperimentConfig, out_dir, seed_override: int | None = None
) -> list[Path]:
    """Resolve, run and write instance/trajectory/summary CSVs.

    Returns the written paths in that order. Raises ConfigError for invalid
    overrides and OSError for I/O failures; never raises on a run that
    merely failed to converge.
    """
    resolved = resolve(config, seed_override)
    run = resolved.run
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    if run.mode == "issue":
        trajectory = simulate_issue(
            resolved.initial_opinions,
            resolved.network,
            resolved.schedule,
            resolved.initial_appraisals,
            tol=run.tol,
            max_steps=run.max_iterations,
        )
        states = [state.entries for state in trajectory.states]
        index_label = "t"
        converged = trajectory.converged
        residual = (
            float(np.abs(states[-1] - states[-2]).max()) if len(states) > 1 else np.inf
        )
        final = states[-1] if converged else None
    else:
        appraisal_map = AppraisalMap(resolved.network, resolved.schedule, run.method)
        trajectory = evolve(
            resolved.initial_appraisals,
            appraisal_map,
            tol=run.tol,
            max_issues=run.max_iterations,
        )
        states = [state.entries for state in trajectory.states]
        index_label = "s"
        converged = trajectory.converged
        residual = trajectory.residual
        final = states[-1] if converged else None
        if run.mode == "equilibrium":
            certified, residual = check_equilibrium(
                trajectory.states[-1], appraisal_map, run.certification_tol
            )
            converged = trajectory.converged and certified
            final = states[-1] if converged else None

    iterations = len(states) - 1
    n = resolved.network.n
    log.info(
        "%s run finished: converged=%s residual=%s iterations=%d",
        run.mode, converged, _fmt(residual), iterations,
    )

    instance_path = out / "instance.csv"
    trajectory_path = out / "trajectory.csv"
    summary_path = out / "summary.csv"

    _write_csv(instance_path, _instance_rows(resolved))

    agent_headers = [f"agent_{i + 1}" for i in range(n)]
    _write_csv(
        trajectory_path,
        [[index_label] + agent_headers]
        + [[str(k)] + [_fmt(v) for v in state] for k, state in enumerate(states)],
    )

    final_cells = [_fmt(v) for v in final] if final is not None else [""] * n
    _write_csv(
        summary_path,
        [
            ["mode", "converged", "residual", "iterations"] + agent_headers,
            [run.mode, "true" if converged else "false", _fmt(residual), str(iterations)]
            + final_cells,
        ],
    )
    return [instance_path, trajectory_path, summary_path]
