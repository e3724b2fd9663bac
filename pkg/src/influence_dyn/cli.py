"""Command-line entry point.

    influence-dyn run --config experiment.json --out results/ [--mode M] [--seed N]
    influence-dyn validate --config experiment.json
    influence-dyn gen-network --n 10 --density 0.3 --seed 42

Exit codes: 0 success (including non-converged runs), 2 invalid
configuration or arguments, 1 runtime/I-O failure. Set INFLUENCE_DYN_LOG to
error, info or debug to control verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .config import MODES, parse_config
from .errors import ConfigError, InfluenceDynError
from .netgen import generate_random_network
from .runner import run_experiment

_LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _configure_logging() -> None:
    raw = os.environ.get("INFLUENCE_DYN_LOG", "error").lower()
    level = _LOG_LEVELS.get(raw)
    if level is None:
        print(
            f"warning: INFLUENCE_DYN_LOG={raw!r} not in {sorted(_LOG_LEVELS)}; "
            "using 'error'",
            file=sys.stderr,
        )
        level = logging.ERROR
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _load_config(path: str):
    try:
        with open(path) as handle:
            doc = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ConfigError(path, f"not valid JSON ({exc})") from exc
    return parse_config(doc)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="influence-dyn",
        description="Opinion-dynamics and social-power experiment runner.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment and write CSV artifacts")
    run.add_argument("--config", required=True, help="JSON experiment config")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--mode", choices=MODES, help="override the configured mode")
    run.add_argument(
        "--seed", type=int, help="override the random-network seed from the config"
    )

    validate = sub.add_parser("validate", help="check a config file and exit")
    validate.add_argument("--config", required=True, help="JSON experiment config")

    gen = sub.add_parser("gen-network", help="print a seeded random network as CSV")
    gen.add_argument("--n", type=int, required=True, help="agent count (>= 2)")
    gen.add_argument("--density", type=float, required=True, help="extra-edge probability")
    gen.add_argument("--seed", type=int, required=True, help="64-bit generator seed")
    return parser


def main(argv=None) -> int:
    _configure_logging()
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = _load_config(args.config)
            if args.mode:
                config = config.with_mode(args.mode)
            paths = run_experiment(config, args.out, seed_override=args.seed)
            for path in paths:
                print(path)
            return 0
        if args.command == "validate":
            _load_config(args.config)
            print("ok")
            return 0
        matrix = generate_random_network(args.n, args.density, args.seed)
        for row in matrix.entries:
            print(",".join(format(v, ".17g") for v in row))
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfluenceDynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
