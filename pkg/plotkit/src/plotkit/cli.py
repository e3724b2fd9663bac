"""Command line: plotkit <trajectory.csv> -o <figure.(png|svg)>"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import TableError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render a per-agent convergence figure from a trajectory CSV.",
    )
    parser.add_argument("trajectory", help="trajectory.csv produced by the runner")
    parser.add_argument(
        "-o", "--output", required=True, help="output figure path (.png or .svg)"
    )
    args = parser.parse_args(argv)

    suffix = Path(args.output).suffix.lower().lstrip(".")
    if suffix not in ("png", "svg"):
        print(f"error: unsupported output format {suffix!r} (use .png or .svg)",
              file=sys.stderr)
        return 2
    try:
        written = render(args.trajectory, args.output, suffix)
    except TableError as exc:
        print(f"error: {args.trajectory}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(written)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
