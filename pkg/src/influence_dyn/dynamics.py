"""Single-issue opinion formation over a directed influence network.

Each agent updates synchronously by minimizing a quadratic cost of the form
alpha*y^2 - 2*(a_i*y_i + b_i*sigma_i + sum_j c_ij*y_j(0))*beta*y + gamma,
whose best response is the convex combination

    y_i(t+1) = a_i*y_i(t) + b_i*sigma_i(t) + sum_j c_ij*y_j(0),

with sigma_i the neighbor aggregate sum_{j!=i} p_ij*y_j(t) and the closure
a_i + b_i + sum_j c_ij = 1 keeping opinions in [0, 1]. The anchoring weights
factor as C = D Z with D = I - A - B diagonal and Z a fixed permutation.

Two regimes are supported. In the anchored regime the anchoring weights are
strictly positive (a_i + b_i < 1), the update contracts, and the limit is
(I - A - B P)^{-1} C y(0). In the averaging regime a_i + b_i = 1 identically
(C = 0), the update matrix A + (I - A) P is row stochastic, and opinions
converge to v^T y(0) * 1 where v is its dominant left eigenvector.

The classic DeGroot and Friedkin-Johnsen recursions are special cases; the
two adapters at the bottom rewrite them into this parameterization.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstraintError,
    DegeneracyError,
    IsolatedAgentError,
    StructuralError,
)
from .netcore import (
    EIGEN_MAX_ITER,
    EIGEN_TOL,
    InteractionMatrix,
    OpinionVector,
    SimplexVector,
    _as_square_matrix,
    _gaussian_solve,
    dominant_left_eigenvector,
)

CLOSURE_TOL = 1e-12
CONSENSUS_ROW_SUM_TOL = 1e-10
GRID_POINTS = 1001
_GRID = np.linspace(0.0, 1.0, GRID_POINTS)

# self-weights this close to 1 count as fully self-weighted (absorbing)
ABSORBING_TOL = 1e-12

MAP_FAMILIES = ("constant", "affine", "polynomial", "identity")


class Regime(enum.Enum):
    """Which closure the coefficient schedule satisfies."""

    ANCHORED = "anchored"  # a_i + b_i < 1: positive weight on initial opinions
    AVERAGING = "averaging"  # a_i + b_i = 1: pure averaging, no anchoring


@dataclass(frozen=True)
class CoefficientMap:
    """Analytic scalar map on [0, 1], stored as polynomial coefficients
    (constant term first). The family label is kept for serialization."""

    family: str
    coeffs: tuple[float, ...]

    def __post_init__(self):
        if self.family not in MAP_FAMILIES:
            raise StructuralError(f"unknown map family {self.family!r}")
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs or not all(np.isfinite(coeffs)):
            raise StructuralError("map coefficients must be finite and non-empty")
        if self.family == "constant" and len(coeffs) != 1:
            raise StructuralError("constant map takes exactly one coefficient")
        if self.family == "affine" and len(coeffs) != 2:
            raise StructuralError("affine map takes exactly two coefficients")
        if self.family == "identity" and coeffs != (0.0, 1.0):
            raise StructuralError("identity map has fixed coefficients (0, 1)")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def constant(cls, value: float) -> "CoefficientMap":
        return cls("constant", (value,))

    @classmethod
    def affine(cls, intercept: float, slope: float) -> "CoefficientMap":
        return cls("affine", (intercept, slope))

    @classmethod
    def identity(cls) -> "CoefficientMap":
        return cls("identity", (0.0, 1.0))

    @classmethod
    def polynomial(cls, coeffs) -> "CoefficientMap":
        return cls("polynomial", tuple(coeffs))

    def __call__(self, x):
        """Evaluate by Horner's rule; accepts scalars or arrays."""
        result = np.zeros_like(np.asarray(x, dtype=float))
        for c in reversed(self.coeffs):
            result = result * x + c
        return result if result.ndim else float(result)

    def complement(self) -> "CoefficientMap":
        """The map x -> 1 - f(x), used to derive b = 1 - a for averaging."""
        coeffs = [-c for c in self.coeffs]
        coeffs[0] += 1.0
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs.pop()
        family = {1: "constant", 2: "affine"}.get(len(coeffs), "polynomial")
        return CoefficientMap(family, tuple(coeffs))


@dataclass(frozen=True)
class CoefficientSchedule:
    """Per-agent self/neighbor weight maps plus the fixed anchoring
    permutation.

    a_maps[i] and b_maps[i] give agent i's self weight and neighbor weight as
    functions of its self-appraisal. The permutation realizes Z in C = D Z:
    agent i anchors on the initial opinion of agent z_perm[i] with weight
    d_i = 1 - a_i - b_i. Construction verifies the range and regime
    constraints on a 1001-point grid over [0, 1]; every later evaluation
    re-checks them at the actual argument.
    """

    a_maps: tuple[CoefficientMap, ...]
    b_maps: tuple[CoefficientMap, ...]
    z_perm: tuple[int, ...]
    regime: Regime

    def __post_init__(self):
        object.__setattr__(self, "a_maps", tuple(self.a_maps))
        object.__setattr__(self, "b_maps", tuple(self.b_maps))
        object.__setattr__(self, "z_perm", tuple(int(i) for i in self.z_perm))
        n = len(self.a_maps)
        if n < 2:
            raise StructuralError("schedule needs at least two agents")
        if len(self.b_maps) != n:
            raise StructuralError("a_maps and b_maps must have equal length")
        if sorted(self.z_perm) != list(range(n)):
            raise StructuralError(
                f"z_perm must be a permutation of 0..{n - 1}, got {self.z_perm}"
            )
        for i, (a_map, b_map) in enumerate(zip(self.a_maps, self.b_maps)):
            av = a_map(_GRID)
            bv = b_map(_GRID)
            for label, values in (("a", av), ("b", bv)):
                if values.min() < -CLOSURE_TOL or values.max() > 1.0 + CLOSURE_TOL:
                    raise ConstraintError(
                        f"{label}_maps[{i}] leaves [0, 1] on the evaluation grid "
                        f"(range [{values.min():.6g}, {values.max():.6g}])"
                    )
            total = av + bv
            if self.regime is Regime.ANCHORED:
                if total.max() >= 1.0:
                    raise ConstraintError(
                        f"anchored regime requires a_i + b_i < 1 on [0, 1]; "
                        f"agent {i} reaches {total.max():.6g}"
                    )
            else:
                worst = np.abs(total - 1.0).max()
                if worst > CLOSURE_TOL:
                    raise ConstraintError(
                        f"averaging regime requires a_i + b_i = 1 identically; "
                        f"agent {i} deviates by {worst:.3e}"
                    )

    @property
    def n(self) -> int:
        return len(self.a_maps)

    @classmethod
    def anchored(cls, a_maps, b_maps, z_perm=None) -> "CoefficientSchedule":
        a_maps = tuple(a_maps)
        if z_perm is None:
            z_perm = tuple(range(len(a_maps)))
        return cls(a_maps, tuple(b_maps), tuple(z_perm), Regime.ANCHORED)

    @classmethod
    def averaging(cls, a_maps) -> "CoefficientSchedule":
        """Averaging schedule from the self-weight maps alone (b = 1 - a)."""
        a_maps = tuple(a_maps)
        b_maps = tuple(m.complement() for m in a_maps)
        return cls(a_maps, b_maps, tuple(range(len(a_maps))), Regime.AVERAGING)

    def coefficients_at(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Evaluate (a, b, d) at the appraisal vector x, re-checking the
        range and regime constraints at this exact point.

        In the averaging regime b is returned as exactly 1 - a so the update
        matrix is exactly row stochastic regardless of how b was specified.
        """
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise StructuralError(
                f"appraisal vector has shape {x.shape}, expected ({self.n},)"
            )
        a = np.array([m(v) for m, v in zip(self.a_maps, x)])
        b = np.array([m(v) for m, v in zip(self.b_maps, x)])
        for label, values in (("a", a), ("b", b)):
            if values.min() < -CLOSURE_TOL or values.max() > 1.0 + CLOSURE_TOL:
                raise ConstraintError(
                    f"{label} coefficients leave [0, 1] at x = {x.tolist()}"
                )
        a = np.clip(a, 0.0, 1.0)
        b = np.clip(b, 0.0, 1.0)
        if self.regime is Regime.ANCHORED:
            d = 1.0 - a - b
            if d.min() <= 0.0:
                raise ConstraintError(
                    f"anchored regime violated: a_i + b_i >= 1 at x = {x.tolist()}"
                )
        else:
            if np.abs(a + b - 1.0).max() > CLOSURE_TOL:
                raise ConstraintError(
                    f"averaging regime violated: a_i + b_i != 1 at x = {x.tolist()}"
                )
            b = 1.0 - a
            d = np.zeros_like(a)
        return a, b, d

    def anchor_matrix(self, d: np.ndarray) -> np.ndarray:
        """C = D Z: row i carries weight d_i in column z_perm[i]."""
        c = np.zeros((self.n, self.n))
        c[np.arange(self.n), np.asarray(self.z_perm)] = d
        return c


@dataclass(frozen=True)
class CostParams:
    """Quadratic cost coefficients. The best response is the cost minimizer
    only when alpha equals beta, so that is enforced; gamma just shifts the
    cost level."""

    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        if not (self.alpha > 0.0 and self.beta > 0.0):
            raise ConstraintError("alpha and beta must be positive")
        if self.alpha != self.beta:
            raise ConstraintError(
                f"alpha must equal beta (got {self.alpha} and {self.beta})"
            )


def cost_eval(
    y: float,
    own: float,
    aggregate: float,
    initial_term: float,
    params: CostParams = CostParams(),
) -> float:
    """Quadratic cost of announcing opinion y given the three pre-weighted
    pull terms (own current opinion, neighbor aggregate, initial-opinion
    anchor)."""
    pull = own + aggregate + initial_term
    return params.alpha * y * y - 2.0 * pull * params.beta * y + params.gamma


def best_response(
    y_own: float,
    sigma: float,
    y0: OpinionVector,
    a_i: float,
    b_i: float,
    c_row,
) -> float:
    """Single-agent cost minimizer a_i*y_own + b_i*sigma + c_row . y(0).

    Raises ConstraintError if the coefficient row breaks the closure
    a_i + b_i + sum_j c_ij = 1 by more than 1e-12; the closure is what keeps
    the result inside [0, 1].
    """
    c_row = np.asarray(c_row, dtype=float)
    closure = a_i + b_i + float(c_row.sum())
    if abs(closure - 1.0) > CLOSURE_TOL:
        raise ConstraintError(
            f"coefficient row sums to {closure!r}, violating closure by "
            f"{abs(closure - 1.0):.3e}"
        )
    return float(a_i * y_own + b_i * sigma + c_row @ y0.entries)


def _check_dims(P: InteractionMatrix, sched: CoefficientSchedule, *vectors):
    n = P.n
    if sched.n != n:
        raise StructuralError(f"schedule is for {sched.n} agents, network has {n}")
    for vec in vectors:
        if vec.n != n:
            raise StructuralError(f"vector length {vec.n} does not match n = {n}")


def step(
    y: OpinionVector,
    y0: OpinionVector,
    P: InteractionMatrix,
    sched: CoefficientSchedule,
    x: SimplexVector,
) -> OpinionVector:
    """One synchronous best-response update of all opinions.

    Matrix form (A + B P) y + C y(0); agrees entrywise with per-agent
    best_response evaluation.
    """
    _check_dims(P, sched, y, y0, x)
    a, b, d = sched.coefficients_at(x.entries)
    nxt = a * y.entries + b * (P.entries @ y.entries)
    if sched.regime is Regime.ANCHORED:
        nxt = nxt + d * y0.entries[np.asarray(sched.z_perm)]
    return OpinionVector(nxt)


@dataclass(frozen=True)
class IssueTrajectory:
    """Opinion path for one issue: states indexed by time step, the
    convergence flag, and (when converged) the final rest point."""

    states: tuple[OpinionVector, ...]
    converged: bool
    consensus: OpinionVector | None = None


def simulate_issue(
    y0: OpinionVector,
    P: InteractionMatrix,
    sched: CoefficientSchedule,
    x: SimplexVector,
    tol: float = 1e-12,
    max_steps: int = 100_000,
) -> IssueTrajectory:
    """Iterate the best-response update until the step difference falls to
    `tol` or `max_steps` runs out. Non-convergence is recorded, not raised."""
    states = [y0]
    current = y0
    converged = False
    for _ in range(max_steps):
        nxt = step(current, y0, P, sched, x)
        states.append(nxt)
        delta = float(np.abs(nxt.entries - current.entries).max())
        current = nxt
        if delta <= tol:
            converged = True
            break
    return IssueTrajectory(
        states=tuple(states),
        converged=converged,
        consensus=current if converged else None,
    )


def consensus_operator(
    P: InteractionMatrix, sched: CoefficientSchedule, x: SimplexVector
) -> np.ndarray:
    """Limit operator (I - A - B P)^{-1} C mapping initial opinions to rest
    opinions in the anchored regime. Verified row stochastic to 1e-10;
    failure signals a regime violation."""
    _check_dims(P, sched, x)
    if sched.regime is not Regime.ANCHORED:
        raise ConstraintError("consensus operator requires an anchored schedule")
    a, b, d = sched.coefficients_at(x.entries)
    n = P.n
    system = np.eye(n) - np.diag(a) - b[:, None] * P.entries
    operator, _ = _gaussian_solve(system, sched.anchor_matrix(d))
    row_dev = float(np.abs(operator.sum(axis=1) - 1.0).max())
    if row_dev > CONSENSUS_ROW_SUM_TOL:
        raise ConstraintError(
            f"consensus operator rows deviate from 1 by {row_dev:.3e}; "
            "schedule violates the anchored regime"
        )
    return operator


def consensus_anchored(
    y0: OpinionVector,
    P: InteractionMatrix,
    sched: CoefficientSchedule,
    x: SimplexVector,
) -> OpinionVector:
    """Closed-form rest point of the anchored regime, (I - A - B P)^{-1} C y(0)."""
    _check_dims(P, sched, y0, x)
    return OpinionVector(consensus_operator(P, sched, x) @ y0.entries)


def _absorbing_agents(a: np.ndarray) -> np.ndarray:
    return np.flatnonzero(a > 1.0 - ABSORBING_TOL)


def consensus_averaging(
    y0: OpinionVector,
    P: InteractionMatrix,
    sched: CoefficientSchedule,
    x: SimplexVector,
    tol: float = EIGEN_TOL,
    max_iter: int = EIGEN_MAX_ITER,
) -> tuple[OpinionVector, SimplexVector]:
    """Averaging-regime limit: (v^T y(0)) * 1 with v the dominant left
    eigenvector of A + (I - A) P.

    A single fully self-weighted agent i makes i the only globally reachable
    node, so v = e_i without eigensolving; two or more such agents leave the
    limit undefined and raise DegeneracyError.
    """
    _check_dims(P, sched, y0, x)
    if sched.regime is not Regime.AVERAGING:
        raise ConstraintError("averaging consensus requires an averaging schedule")
    a, _, _ = sched.coefficients_at(x.entries)
    absorbing = _absorbing_agents(a)
    if absorbing.size >= 2:
        raise DegeneracyError(
            f"agents {absorbing.tolist()} all have a_i = 1; the update matrix "
            "is reducible with multiple closed classes"
        )
    if absorbing.size == 1:
        weights = np.zeros(P.n)
        weights[absorbing[0]] = 1.0
        v = SimplexVector(weights)
    else:
        update = np.diag(a) + (1.0 - a)[:, None] * P.entries
        v = dominant_left_eigenvector(update, 0.0, tol, max_iter)
    level = float(v.entries @ y0.entries)
    return OpinionVector(np.full(P.n, level)), v


def _check_degroot_input(W) -> np.ndarray:
    arr = _as_square_matrix(W, min_n=2)
    if float(arr.min()) < 0.0:
        raise StructuralError("adapter input must be entrywise nonnegative")
    row_dev = np.abs(arr.sum(axis=1) - 1.0)
    if float(row_dev.max()) > CLOSURE_TOL:
        raise StructuralError(
            f"adapter input must be row stochastic; worst deviation "
            f"{row_dev.max():.3e}"
        )
    diag = np.diagonal(arr)
    isolated = np.flatnonzero(diag > 1.0 - ABSORBING_TOL)
    if isolated.size:
        raise IsolatedAgentError(
            f"agents {isolated.tolist()} have unit self-weight; no neighbor "
            "mass remains to normalize"
        )
    return arr


def from_degroot(W) -> tuple[InteractionMatrix, CoefficientSchedule]:
    """Rewrite the averaging recursion y(t+1) = W y(t) in this model's terms:
    a_i = w_ii, b_i = 1 - w_ii, p_ij = w_ij / (1 - w_ii). The induced update
    reproduces W y(t) exactly."""
    arr = _check_degroot_input(W)
    diag = np.diagonal(arr).copy()
    off = arr - np.diag(diag)
    interaction = InteractionMatrix(off / (1.0 - diag)[:, None])
    sched = CoefficientSchedule.averaging(
        [CoefficientMap.constant(w) for w in diag]
    )
    return interaction, sched


def from_friedkin_johnsen(
    W, theta
) -> tuple[InteractionMatrix, CoefficientSchedule]:
    """Rewrite y(t+1) = Theta W y(t) + (I - Theta) y(0): a_i = theta_i*w_ii,
    b_i = theta_i*(1 - w_ii), and anchoring weight d_i = 1 - theta_i on the
    agent's own initial opinion (Z = identity).

    All theta_i = 1 collapses to the plain averaging adapter. A mix of unit
    and non-unit theta puts different rows in different regimes, which the
    schedule cannot represent, so that raises ConstraintError.
    """
    theta = np.asarray(theta, dtype=float)
    arr = _check_degroot_input(W)
    if theta.shape != (arr.shape[0],):
        raise StructuralError(
            f"theta has shape {theta.shape}, expected ({arr.shape[0]},)"
        )
    if theta.min() < 0.0 or theta.max() > 1.0:
        raise StructuralError("theta entries must lie in [0, 1]")
    unit = theta > 1.0 - ABSORBING_TOL
    if unit.all():
        return from_degroot(W)
    if unit.any():
        raise ConstraintError(
            f"agents {np.flatnonzero(unit).tolist()} have theta_i = 1 while "
            "others do not; mixed anchoring regimes are not representable"
        )
    diag = np.diagonal(arr).copy()
    off = arr - np.diag(diag)
    interaction = InteractionMatrix(off / (1.0 - diag)[:, None])
    sched = CoefficientSchedule.anchored(
        [CoefficientMap.constant(t * w) for t, w in zip(theta, diag)],
        [CoefficientMap.constant(t * (1.0 - w)) for t, w in zip(theta, diag)],
    )
    return interaction, sched
