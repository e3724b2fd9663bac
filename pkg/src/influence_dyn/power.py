"""Evolution of self-appraisals (social power) across a sequence of issues.

After each issue the group reaches its rest opinions, and every agent's
self-appraisal for the next issue becomes the relative control it had over
that outcome. In the anchored regime the control is read off the consensus
operator (I - A(x) - B(x) P)^{-1} C(x), whose column means give the next
appraisal vector. In the averaging regime it is the dominant left eigenvector
of A(x) + (I - A(x)) P.

Each regime also has an equivalent, cheaper formulation which this module
implements side by side so the two routes can check each other:

* anchored: the next appraisal is the permuted dominant left eigenvector of
  the transfer matrix 11^T/n - (I - A - B)^{-1} B (I - P), a unit-row-sum
  Metzler matrix whose off-diagonal entries are at least 1/n;
* averaging: the next appraisal is (p_i / (1 - a_i(x_i)))_i normalized,
  with p the dominant left eigenvector of P itself, computed once.

`evolve` runs the resulting fixed-point iteration over issues, which is the
object under empirical convergence study, so no acceleration is applied.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError, DegeneracyError, StructuralError
from .dynamics import (
    CoefficientSchedule,
    Regime,
    _absorbing_agents,
    _check_dims,
    consensus_operator,
)
from .netcore import (
    EIGEN_MAX_ITER,
    EIGEN_TOL,
    InteractionMatrix,
    SimplexVector,
    dominant_left_eigenvector,
)

EVOLVE_TOL = 1e-10
EVOLVE_MAX_ISSUES = 100_000
EQUILIBRIUM_TOL = 1e-8


class StepMethod(enum.Enum):
    """Which of the two equivalent appraisal updates to run."""

    DIRECT = "direct"  # from the definition (consensus operator / eigenvector)
    REDUCED = "reduced"  # equivalent transfer-matrix / closed-form route


def step_anchored_direct(
    x: SimplexVector, P: InteractionMatrix, sched: CoefficientSchedule
) -> SimplexVector:
    """Next self-appraisals in the anchored regime: column means of the
    consensus operator at x. Strictly positive because the anchoring weights
    are."""
    operator = consensus_operator(P, sched, x)
    means = operator.sum(axis=0) / P.n
    # exact column-mean total is 1 (rows sum to 1); renormalize off the
    # linear-solve rounding so the simplex invariant holds exactly
    return SimplexVector(means / means.sum())


def eigen_step_matrix(
    x: SimplexVector, P: InteractionMatrix, sched: CoefficientSchedule
) -> np.ndarray:
    """Transfer matrix 11^T/n - (I - A - B)^{-1} B (I - P) at appraisals x.

    Its dominant left eigenvector (eigenvalue 1) is the pre-permutation next
    appraisal vector. Structure guaranteed by construction and asserted
    here: unit row sums, off-diagonal entries >= 1/n, diagonal entries
    1/n - b_i / (1 - a_i - b_i).
    """
    _check_dims(P, sched, x)
    if sched.regime is not Regime.ANCHORED:
        raise ConstraintError("the eigen step matrix requires an anchored schedule")
    a, b, d = sched.coefficients_at(x.entries)
    n = P.n
    ratio = b / d
    matrix = np.full((n, n), 1.0 / n) - ratio[:, None] * (np.eye(n) - P.entries)
    assert float(np.abs(matrix.sum(axis=1) - 1.0).max()) <= 1e-12
    off_diag = matrix[~np.eye(n, dtype=bool)]
    assert float(off_diag.min()) >= 1.0 / n - 1e-12
    return matrix


def step_anchored_eigen(
    x: SimplexVector,
    P: InteractionMatrix,
    sched: CoefficientSchedule,
    tol: float = EIGEN_TOL,
    max_iter: int = EIGEN_MAX_ITER,
) -> SimplexVector:
    """Equivalent anchored update via the transfer matrix: take its dominant
    left eigenvector u (shifted so the iteration matrix is positive) and
    route it through the anchoring permutation."""
    matrix = eigen_step_matrix(x, P, sched)
    shift = max(0.0, -float(matrix.diagonal().min())) + 1.0
    u = dominant_left_eigenvector(matrix, shift, tol, max_iter)
    nxt = np.empty(P.n)
    nxt[np.asarray(sched.z_perm)] = u.entries
    return SimplexVector(nxt)


def step_averaging_direct(
    x: SimplexVector,
    P: InteractionMatrix,
    sched: CoefficientSchedule,
    tol: float = EIGEN_TOL,
    max_iter: int = EIGEN_MAX_ITER,
) -> SimplexVector:
    """Next self-appraisals in the averaging regime: the dominant left
    eigenvector of A(x) + (I - A(x)) P.

    Exactly one fully self-weighted agent i makes i the only globally
    reachable node, so the result is e_i without eigensolving; two or more
    raise DegeneracyError.
    """
    _check_dims(P, sched, x)
    if sched.regime is not Regime.AVERAGING:
        raise ConstraintError("averaging step requires an averaging schedule")
    a, _, _ = sched.coefficients_at(x.entries)
    absorbing = _absorbing_agents(a)
    if absorbing.size >= 2:
        raise DegeneracyError(
            f"agents {absorbing.tolist()} all have a_i = 1; the dominant "
            "eigenvector is not unique"
        )
    if absorbing.size == 1:
        vertex = np.zeros(P.n)
        vertex[absorbing[0]] = 1.0
        return SimplexVector(vertex)
    update = np.diag(a) + (1.0 - a)[:, None] * P.entries
    return dominant_left_eigenvector(update, 0.0, tol, max_iter)


def step_averaging_formula(
    x: SimplexVector,
    P: InteractionMatrix,
    sched: CoefficientSchedule,
    network_weights: SimplexVector | None = None,
    tol: float = EIGEN_TOL,
    max_iter: int = EIGEN_MAX_ITER,
) -> SimplexVector:
    """Closed-form averaging update: (p_i / (1 - a_i(x_i)))_i normalized,
    where p is the dominant left eigenvector of P (pass it precomputed via
    `network_weights` to avoid re-solving). Same degenerate branch as the
    direct form."""
    _check_dims(P, sched, x)
    if sched.regime is not Regime.AVERAGING:
        raise ConstraintError("averaging step requires an averaging schedule")
    a, _, _ = sched.coefficients_at(x.entries)
    absorbing = _absorbing_agents(a)
    if absorbing.size >= 2:
        raise DegeneracyError(
            f"agents {absorbing.tolist()} all have a_i = 1; the dominant "
            "eigenvector is not unique"
        )
    if absorbing.size == 1:
        vertex = np.zeros(P.n)
        vertex[absorbing[0]] = 1.0
        return SimplexVector(vertex)
    if network_weights is None:
        network_weights = dominant_left_eigenvector(P.entries, 0.0, tol, max_iter)
    scaled = network_weights.entries / (1.0 - a)
    return SimplexVector(scaled / scaled.sum())


@dataclass(frozen=True)
class AppraisalMap:
    """The issue-to-issue self-appraisal map for one network and schedule.

    `method` selects between the definitional update and its reduced
    equivalent. For averaging schedules the network's own dominant left
    eigenvector is computed once at construction and reused by the reduced
    form.
    """

    network: InteractionMatrix
    schedule: CoefficientSchedule
    method: StepMethod = StepMethod.DIRECT
    network_weights: SimplexVector | None = None

    def __post_init__(self):
        if self.schedule.n != self.network.n:
            raise StructuralError(
                f"schedule is for {self.schedule.n} agents, network has "
                f"{self.network.n}"
            )
        if self.schedule.regime is Regime.AVERAGING and self.network_weights is None:
            weights = dominant_left_eigenvector(self.network.entries)
            object.__setattr__(self, "network_weights", weights)

    @property
    def regime(self) -> Regime:
        return self.schedule.regime

    def step(self, x: SimplexVector) -> SimplexVector:
        if self.regime is Regime.ANCHORED:
            if self.method is StepMethod.DIRECT:
                return step_anchored_direct(x, self.network, self.schedule)
            return step_anchored_eigen(x, self.network, self.schedule)
        if self.method is StepMethod.DIRECT:
            return step_averaging_direct(x, self.network, self.schedule)
        return step_averaging_formula(
            x, self.network, self.schedule, self.network_weights
        )


@dataclass(frozen=True)
class PowerTrajectory:
    """Issue-indexed appraisal path with its convergence diagnostics.

    `residual` is the last step difference (inf when no step ran);
    `equilibrium` is the final state when converged, else None.
    """

    states: tuple[SimplexVector, ...]
    converged: bool
    residual: float
    equilibrium: SimplexVector | None = None


def evolve(
    x0: SimplexVector,
    appraisal_map: AppraisalMap,
    tol: float = EVOLVE_TOL,
    max_issues: int = EVOLVE_MAX_ISSUES,
) -> PowerTrajectory:
    """Iterate the appraisal map over issues until the step difference falls
    to `tol` or `max_issues` runs out.

    Plain fixed-point iteration: the trajectory itself is the object of
    study, so no acceleration. Non-convergence is a recorded outcome. With
    identity self-weight maps the simplex vertices are absorbing; starting
    there returns immediately.
    """
    states = [x0]
    current = x0
    converged = False
    residual = np.inf
    for _ in range(max_issues):
        nxt = appraisal_map.step(current)
        states.append(nxt)
        residual = float(np.abs(nxt.entries - current.entries).max())
        current = nxt
        if residual <= tol:
            converged = True
            break
    return PowerTrajectory(
        states=tuple(states),
        converged=converged,
        residual=float(residual),
        equilibrium=current if converged else None,
    )


def check_equilibrium(
    x: SimplexVector, appraisal_map: AppraisalMap, tol: float = EQUILIBRIUM_TOL
) -> tuple[bool, float]:
    """Certify a candidate fixed point: applies the map once and returns
    (residual <= tol, residual) with residual = ||F(x) - x||_inf."""
    image = appraisal_map.step(x)
    residual = float(np.abs(image.entries - x.entries).max())
    return residual <= tol, residual


def has_star_topology(P: InteractionMatrix) -> bool:
    """True iff some center node is incident to every edge of the
    positive-entry digraph (with n = 2 that is always the case)."""
    adjacency = P.entries > 0
    n = P.n
    for center in range(n):
        others = [i for i in range(n) if i != center]
        if not adjacency[np.ix_(others, others)].any():
            return True
    return False
