"""Experiment configuration: a single JSON document, strictly validated.

Schema (see README for the full reference):

    {
      "network":  {"rows": [[...], ...]}
                  | {"random": {"n": int, "edge_density": float, "seed": int}},
      "schedule": {"regime": "anchored" | "averaging",
                   "a": map-spec | [map-spec, ...],
                   "b": ... (anchored only),
                   "permutation": [ints] (anchored only, optional)},
      "initial_opinions":   [floats] | "spread"   (optional, default "spread"),
      "initial_appraisals": [floats] | "uniform"  (optional, default "uniform"),
      "run": {"mode": "issue" | "power" | "equilibrium",
              "tol": float, "max_iterations": int,
              "method": "direct" | "reduced",
              "certification_tol": float}
    }

Map specs: {"family": "constant", "value": v},
{"family": "affine", "intercept": c0, "slope": c1},
{"family": "polynomial", "coefficients": [c0, c1, ...]},
{"family": "identity"}.

Unknown keys are rejected. Every rejection names the offending field path.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, ConstraintError, InfluenceDynError, StructuralError
from .dynamics import CoefficientMap, CoefficientSchedule
from .netcore import InteractionMatrix, OpinionVector, SimplexVector
from .netgen import generate_random_network
from .power import StepMethod

MODES = ("issue", "power", "equilibrium")

_DEFAULT_TOL = {"issue": 1e-12, "power": 1e-10, "equilibrium": 1e-10}
_DEFAULT_MAX_ITERATIONS = 100_000
_DEFAULT_CERTIFICATION_TOL = 1e-8


def _expect_object(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(path, f"expected an object, got {type(value).__name__}")
    return value


def _reject_unknown(obj: dict, allowed: tuple[str, ...], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ConfigError(
                f"{path}.{key}" if path else key,
                f"unexpected key (allowed: {', '.join(allowed)})",
            )


def _expect_number(value, path: str, lo=None, hi=None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    num = float(value)
    if not np.isfinite(num):
        raise ConfigError(path, "must be finite")
    if lo is not None and num < lo:
        raise ConfigError(path, f"must be >= {lo}, got {num}")
    if hi is not None and num > hi:
        raise ConfigError(path, f"must be <= {hi}, got {num}")
    return num


def _expect_int(value, path: str, lo=None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise ConfigError(path, f"must be >= {lo}, got {value}")
    return value


def _expect_array(value, path: str) -> list:
    if not isinstance(value, list):
        raise ConfigError(path, f"expected an array, got {type(value).__name__}")
    return value


def _expect_choice(value, path: str, choices: tuple[str, ...]) -> str:
    if value not in choices:
        raise ConfigError(path, f"expected one of {', '.join(choices)}, got {value!r}")
    return value


@dataclass(frozen=True)
class NetworkSpec:
    """Either explicit matrix rows or seeded random generation parameters."""

    rows: InteractionMatrix | None = None
    n: int | None = None
    edge_density: float | None = None
    seed: int | None = None

    @property
    def size(self) -> int:
        return self.rows.n if self.rows is not None else self.n

    @property
    def is_random(self) -> bool:
        return self.rows is None

    def build(self, seed_override: int | None = None) -> tuple[InteractionMatrix, int | None]:
        """Resolve to a concrete matrix; returns (matrix, seed actually used)."""
        if self.rows is not None:
            if seed_override is not None:
                raise ConfigError(
                    "network", "a seed override requires a random network"
                )
            return self.rows, None
        seed = self.seed if seed_override is None else seed_override
        return generate_random_network(self.n, self.edge_density, seed), seed


@dataclass(frozen=True)
class RunSettings:
    mode: str
    tol: float
    max_iterations: int
    method: StepMethod
    certification_tol: float


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully validated experiment description, ready to resolve and run."""

    network: NetworkSpec
    schedule: CoefficientSchedule
    initial_opinions: OpinionVector
    initial_appraisals: SimplexVector
    run: RunSettings

    def with_mode(self, mode: str) -> "ExperimentConfig":
        """CLI mode override; configured tolerances are kept as-is."""
        if mode not in MODES:
            raise ConfigError("run.mode", f"expected one of {', '.join(MODES)}")
        return replace(self, run=replace(self.run, mode=mode))


@dataclass(frozen=True)
class ResolvedExperiment:
    network: InteractionMatrix
    schedule: CoefficientSchedule
    initial_opinions: OpinionVector
    initial_appraisals: SimplexVector
    run: RunSettings
    network_seed: int | None
    edge_density: float | None


def _parse_network(doc: dict) -> NetworkSpec:
    obj = _expect_object(doc.get("network"), "network")
    _reject_unknown(obj, ("rows", "random"), "network")
    if ("rows" in obj) == ("random" in obj):
        raise ConfigError("network", "provide exactly one of 'rows' or 'random'")
    if "rows" in obj:
        rows = _expect_array(obj["rows"], "network.rows")
        for i, row in enumerate(rows):
            row = _expect_array(row, f"network.rows[{i}]")
            for j, v in enumerate(row):
                _expect_number(v, f"network.rows[{i}][{j}]")
        try:
            matrix = InteractionMatrix(np.array(rows, dtype=float))
        except InfluenceDynError as exc:
            raise ConfigError("network.rows", str(exc)) from exc
        return NetworkSpec(rows=matrix)
    rnd = _expect_object(obj["random"], "network.random")
    _reject_unknown(rnd, ("n", "edge_density", "seed"), "network.random")
    n = _expect_int(rnd.get("n"), "network.random.n", lo=2)
    density = _expect_number(rnd.get("edge_density"), "network.random.edge_density", 0.0, 1.0)
    seed = _expect_int(rnd.get("seed"), "network.random.seed", lo=0)
    if seed >= 2**64:
        raise ConfigError("network.random.seed", "must fit in 64 bits")
    return NetworkSpec(n=n, edge_density=density, seed=seed)


def _parse_map(spec, path: str) -> CoefficientMap:
    obj = _expect_object(spec, path)
    family = _expect_choice(
        obj.get("family"), f"{path}.family",
        ("constant", "affine", "polynomial", "identity"),
    )
    if family == "constant":
        _reject_unknown(obj, ("family", "value"), path)
        return CoefficientMap.constant(_expect_number(obj.get("value"), f"{path}.value"))
    if family == "affine":
        _reject_unknown(obj, ("family", "intercept", "slope"), path)
        return CoefficientMap.affine(
            _expect_number(obj.get("intercept"), f"{path}.intercept"),
            _expect_number(obj.get("slope"), f"{path}.slope"),
        )
    if family == "polynomial":
        _reject_unknown(obj, ("family", "coefficients"), path)
        coeffs = _expect_array(obj.get("coefficients"), f"{path}.coefficients")
        if not coeffs:
            raise ConfigError(f"{path}.coefficients", "must be non-empty")
        return CoefficientMap.polynomial(
            [_expect_number(c, f"{path}.coefficients[{k}]") for k, c in enumerate(coeffs)]
        )
    _reject_unknown(obj, ("family",), path)
    return CoefficientMap.identity()


def _parse_map_list(spec, path: str, n: int) -> tuple[CoefficientMap, ...]:
    if isinstance(spec, list):
        if len(spec) != n:
            raise ConfigError(path, f"expected {n} map specs, got {len(spec)}")
        return tuple(_parse_map(m, f"{path}[{i}]") for i, m in enumerate(spec))
    # a single spec applies to every agent
    return (_parse_map(spec, path),) * n


def _parse_schedule(doc: dict, n: int) -> CoefficientSchedule:
    obj = _expect_object(doc.get("schedule"), "schedule")
    _reject_unknown(obj, ("regime", "a", "b", "permutation"), "schedule")
    regime = _expect_choice(obj.get("regime"), "schedule.regime", ("anchored", "averaging"))
    if "a" not in obj:
        raise ConfigError("schedule.a", "self-weight maps are required")
    a_maps = _parse_map_list(obj["a"], "schedule.a", n)

    if regime == "averaging":
        for key in ("b", "permutation"):
            if key in obj:
                raise ConfigError(
                    f"schedule.{key}",
                    "not allowed in the averaging regime (b is derived as 1 - a "
                    "and there is no anchoring permutation)",
                )
        try:
            return CoefficientSchedule.averaging(a_maps)
        except (ConstraintError, StructuralError) as exc:
            raise ConfigError("schedule", str(exc)) from exc

    if "b" not in obj:
        raise ConfigError("schedule.b", "neighbor-weight maps are required for anchored")
    b_maps = _parse_map_list(obj["b"], "schedule.b", n)
    perm = tuple(range(n))
    if "permutation" in obj:
        raw = _expect_array(obj["permutation"], "schedule.permutation")
        perm = tuple(
            _expect_int(v, f"schedule.permutation[{i}]", lo=0) for i, v in enumerate(raw)
        )
        if sorted(perm) != list(range(n)):
            raise ConfigError(
                "schedule.permutation", f"must be a permutation of 0..{n - 1}"
            )
    try:
        return CoefficientSchedule.anchored(a_maps, b_maps, perm)
    except (ConstraintError, StructuralError) as exc:
        raise ConfigError("schedule", str(exc)) from exc


def _parse_opinions(doc: dict, n: int) -> OpinionVector:
    raw = doc.get("initial_opinions", "spread")
    if raw == "spread":
        return OpinionVector(np.linspace(0.0, 1.0, n))
    if isinstance(raw, str):
        raise ConfigError("initial_opinions", f"unknown preset {raw!r} (only 'spread')")
    values = _expect_array(raw, "initial_opinions")
    if len(values) != n:
        raise ConfigError("initial_opinions", f"expected {n} values, got {len(values)}")
    parsed = [
        _expect_number(v, f"initial_opinions[{i}]", 0.0, 1.0) for i, v in enumerate(values)
    ]
    return OpinionVector(np.array(parsed))


def _parse_appraisals(doc: dict, n: int) -> SimplexVector:
    raw = doc.get("initial_appraisals", "uniform")
    if raw == "uniform":
        return SimplexVector(np.full(n, 1.0 / n))
    if isinstance(raw, str):
        raise ConfigError(
            "initial_appraisals", f"unknown preset {raw!r} (only 'uniform')"
        )
    values = _expect_array(raw, "initial_appraisals")
    if len(values) != n:
        raise ConfigError("initial_appraisals", f"expected {n} values, got {len(values)}")
    parsed = [
        _expect_number(v, f"initial_appraisals[{i}]", 0.0, 1.0)
        for i, v in enumerate(values)
    ]
    try:
        return SimplexVector(np.array(parsed))
    except InfluenceDynError as exc:
        raise ConfigError("initial_appraisals", str(exc)) from exc


def _parse_run(doc: dict) -> RunSettings:
    obj = _expect_object(doc.get("run"), "run")
    _reject_unknown(
        obj, ("mode", "tol", "max_iterations", "method", "certification_tol"), "run"
    )
    mode = _expect_choice(obj.get("mode"), "run.mode", MODES)
    tol = _expect_number(obj.get("tol", _DEFAULT_TOL[mode]), "run.tol", lo=0.0)
    max_iterations = _expect_int(
        obj.get("max_iterations", _DEFAULT_MAX_ITERATIONS), "run.max_iterations", lo=0
    )
    method = StepMethod(
        _expect_choice(obj.get("method", "direct"), "run.method", ("direct", "reduced"))
    )
    certification_tol = _expect_number(
        obj.get("certification_tol", _DEFAULT_CERTIFICATION_TOL),
        "run.certification_tol",
        lo=0.0,
    )
    return RunSettings(mode, tol, max_iterations, method, certification_tol)


def parse_config(doc) -> ExperimentConfig:
    """Validate a decoded JSON document into an ExperimentConfig, or raise
    ConfigError naming the offending field path."""
    top = _expect_object(doc, "<config>")
    _reject_unknown(
        top,
        ("network", "schedule", "initial_opinions", "initial_appraisals", "run"),
        "",
    )
    network = _parse_network(top)
    n = network.size
    schedule = _parse_schedule(top, n)
    opinions = _parse_opinions(top, n)
    appraisals = _parse_appraisals(top, n)
    run = _parse_run(top)
    return ExperimentConfig(network, schedule, opinions, appraisals, run)


def resolve(config: ExperimentConfig, seed_override: int | None = None) -> ResolvedExperiment:
    """Build the concrete network (applying any seed override) and bundle
    everything a runner needs."""
    matrix, seed = config.network.build(seed_override)
    return ResolvedExperiment(
        network=matrix,
        schedule=config.schedule,
        initial_opinions=config.initial_opinions,
        initial_appraisals=config.initial_appraisals,
        run=config.run,
        network_seed=seed,
        edge_density=config.network.edge_density,
    )
