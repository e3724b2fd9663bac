"""Render per-agent convergence figures from trajectory CSV files.

Input contract: a header row whose first column is the index name, `t` for
within-issue opinion paths or `s` for issue-indexed self-appraisal paths,
followed by one column per agent; every later row carries the integer index
and one real value per agent. Opinion values must lie in [0, 1]; appraisal
rows must sum to 1 within 1e-9.

This package deliberately never imports the simulation library; the CSV file
is the whole interface.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

__version__ = "0.1.0"

OPINION_SLACK = 1e-12
APPRAISAL_ROW_TOL = 1e-9

_AXIS_LABELS = {
    "t": ("time step t", "opinion"),
    "s": ("issue s", "self-appraisal"),
}


class TableError(ValueError):
    """Malformed trajectory CSV; `row` is the offending row number, counting
    the header as row 0."""

    def __init__(self, row: int, message: str):
        self.row = row
        super().__init__(f"row {row}: {message}")


@dataclass(frozen=True)
class TrajectoryTable:
    """Parsed trajectory: the index kind ('t' or 's'), the index values and
    one series per agent."""

    kind: str
    index: tuple[float, ...]
    series: tuple[tuple[float, ...], ...]  # one inner tuple per agent

    @property
    def agents(self) -> int:
        return len(self.series)

    @property
    def length(self) -> int:
        return len(self.index)


def load_table(csv_path) -> TrajectoryTable:
    """Parse and validate a trajectory CSV, or raise TableError naming the
    first bad row."""
    with open(csv_path, newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        raise TableError(0, "empty file, expected a header row")
    header = rows[0]
    if len(header) < 2:
        raise TableError(0, "header needs an index column and at least one agent")
    kind = header[0]
    if kind not in _AXIS_LABELS:
        raise TableError(0, f"index column must be 't' or 's', got {kind!r}")
    agents = len(header) - 1

    index: list[float] = []
    series: list[list[float]] = [[] for _ in range(agents)]
    for number, row in enumerate(rows[1:], start=1):
        if len(row) != agents + 1:
            raise TableError(number, f"expected {agents + 1} columns, got {len(row)}")
        try:
            values = [float(cell) for cell in row]
        except ValueError as exc:
            raise TableError(number, str(exc)) from exc
        index.append(values[0])
        for agent, value in enumerate(values[1:]):
            series[agent].append(value)
        if kind == "t":
            low, high = min(values[1:]), max(values[1:])
            if low < -OPINION_SLACK or high > 1.0 + OPINION_SLACK:
                raise TableError(
                    number, f"opinion values outside [0, 1]: range [{low:g}, {high:g}]"
                )
        else:
            total = sum(values[1:])
            if abs(total - 1.0) > APPRAISAL_ROW_TOL:
                raise TableError(
                    number, f"appraisal row sums to {total!r}, expected 1 within 1e-09"
                )
    if not index:
        raise TableError(1, "no data rows after the header")
    return TrajectoryTable(
        kind=kind,
        index=tuple(index),
        series=tuple(tuple(column) for column in series),
    )


def build_figure(table: TrajectoryTable):
    """One polyline per agent (markers only for a single-row table), labeled
    axes and a legend with agent indices. Import of matplotlib is deferred so
    parsing errors never depend on a plotting backend."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "plotkit"

    fig, ax = plt.subplots(figsize=(7.0, 4.5), dpi=110)
    for agent, column in enumerate(table.series, start=1):
        if table.length == 1:
            ax.scatter(table.index, column, label=f"agent {agent}")
        else:
            ax.plot(table.index, column, label=f"agent {agent}")
    x_label, y_label = _AXIS_LABELS[table.kind]
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    ax.legend()
    fig.tight_layout()
    return fig


def render(csv_path, out_path, format: str) -> str:
    """Render `csv_path` to `out_path` in the given format ('png' or 'svg').

    Deterministic: identical input bytes yield identical output bytes (PNG
    carries no timestamps; SVG ids are salted and its date metadata is
    suppressed). Returns the written path.
    """
    if format not in ("png", "svg"):
        raise ValueError(f"format must be 'png' or 'svg', got {format!r}")
    table = load_table(csv_path)
    fig = build_figure(table)
    try:
        if format == "svg":
            fig.savefig(out_path, format="svg", metadata={"Date": None})
        else:
            fig.savefig(out_path, format="png")
    finally:
        import matplotlib.pyplot as plt

        plt.close(fig)
    return str(out_path)
