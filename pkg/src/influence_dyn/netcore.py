"""Validated network/vector domain types and shared numerical kernels.

This module owns the value types used everywhere else (interaction matrix,
simplex vector, opinion vector) plus the three kernels the dynamics need:
strong-connectivity testing, dominant left eigenvectors of nonnegative
matrices, and a deterministic pivoted linear solve.

All types are immutable after construction (the wrapped arrays are marked
read-only) and every function here is pure, so everything is safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidMatrixError,
    InvalidVectorError,
    IterationLimitError,
    SingularMatrixError,
    StructuralError,
)

ROW_SUM_TOL = 1e-12
SIMPLEX_TOL = 1e-12
RANGE_TOL = 1e-12
PIVOT_TOL = 1e-13
SOLVE_RESIDUAL_TOL = 1e-10

EIGEN_TOL = 1e-12
EIGEN_MAX_ITER = 100_000


def _as_square_matrix(matrix, min_n: int = 1) -> np.ndarray:
    """Coerce to a finite square float array or raise StructuralError."""
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise StructuralError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] < min_n:
        raise StructuralError(f"matrix must be at least {min_n}x{min_n}")
    if not np.all(np.isfinite(arr)):
        raise StructuralError("matrix entries must be finite")
    return arr


def _as_vector(vec, name: str = "vector") -> np.ndarray:
    arr = np.asarray(vec, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise StructuralError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise StructuralError(f"{name} entries must be finite")
    return arr


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Violation:
    """One failed validation check: name, worst offending index, magnitude.

    For `strong_connectivity` the index is a node outside the first strongly
    connected component and the magnitude is the number of extra components.
    """

    check: str
    index: int | tuple[int, int]
    magnitude: float


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]

    def __post_init__(self):
        if self.ok != (len(self.violations) == 0):
            raise StructuralError("ok flag must match emptiness of violations")


def strongly_connected_components(adjacency: np.ndarray) -> tuple[list[int], int]:
    """Label strongly connected components of a boolean adjacency matrix.

    Kosaraju's two-pass algorithm with explicit stacks (no recursion), linear
    in nodes plus edges. Returns (labels, component count); labels follow the
    order components are discovered on the reverse pass.
    """
    adj = np.asarray(adjacency, dtype=bool)
    n = adj.shape[0]
    out_edges = [np.flatnonzero(adj[i]).tolist() for i in range(n)]
    in_edges = [np.flatnonzero(adj[:, j]).tolist() for j in range(n)]

    order: list[int] = []
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        stack = [(start, iter(out_edges[start]))]
        while stack:
            node, edge_iter = stack[-1]
            pushed = False
            for nxt in edge_iter:
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append((nxt, iter(out_edges[nxt])))
                    pushed = True
                    break
            if not pushed:
                order.append(node)
                stack.pop()

    labels = [-1] * n
    count = 0
    for start in reversed(order):
        if labels[start] != -1:
            continue
        labels[start] = count
        todo = [start]
        while todo:
            u = todo.pop()
            for v in in_edges[u]:
                if labels[v] == -1:
                    labels[v] = count
                    todo.append(v)
        count += 1
    return labels, count


def strongly_connected(matrix) -> bool:
    """True iff the digraph of strictly positive entries is one SCC.

    The positivity threshold is exact (> 0): entries are model inputs, not
    measurements, so no epsilon is applied.
    """
    arr = _as_square_matrix(matrix)
    if np.any(arr < 0):
        raise StructuralError("adjacency weights must be nonnegative")
    _, count = strongly_connected_components(arr > 0)
    return count == 1


def validate_interaction_matrix(matrix) -> ValidationReport:
    """Check a candidate interaction matrix against all four invariants.

    Checks: exactly-zero diagonal, nonnegative entries, unit row sums
    (within 1e-12), and strong connectivity of the positive-entry digraph.
    Every failed check is reported, not just the first. Non-square or
    non-finite input raises StructuralError instead of producing a report.
    """
    arr = _as_square_matrix(matrix, min_n=2)
    violations: list[Violation] = []

    diag = np.abs(np.diagonal(arr))
    if np.any(diag != 0.0):
        worst = int(np.argmax(diag))
        violations.append(Violation("zero_diagonal", worst, float(diag[worst])))

    if np.any(arr < 0):
        flat = int(np.argmin(arr))
        i, j = np.unravel_index(flat, arr.shape)
        violations.append(
            Violation("nonnegative_entries", (int(i), int(j)), float(-arr[i, j]))
        )

    deviation = np.abs(arr.sum(axis=1) - 1.0)
    if np.any(deviation > ROW_SUM_TOL):
        worst = int(np.argmax(deviation))
        violations.append(Violation("row_sums", worst, float(deviation[worst])))

    labels, count = strongly_connected_components(arr > 0)
    if count != 1:
        offending = next(i for i, lab in enumerate(labels) if lab != labels[0])
        violations.append(Violation("strong_connectivity", offending, float(count - 1)))

    return ValidationReport(ok=not violations, violations=tuple(violations))


@dataclass(frozen=True)
class InteractionMatrix:
    """Relative interaction matrix: row-stochastic, zero diagonal, strongly
    connected. Entry (i, j) is the weight agent i gives to agent j."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        report = validate_interaction_matrix(arr)
        if not report.ok:
            raise InvalidMatrixError(report)
        object.__setattr__(self, "entries", _freeze(arr))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SimplexVector:
    """Nonnegative vector summing to one (self-appraisals, Perron vectors)."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _as_vector(self.entries, "simplex vector")
        if float(arr.min()) < 0.0:
            raise InvalidVectorError(
                f"simplex vector has negative entry {arr.min():.3e}"
            )
        total = float(arr.sum())
        if abs(total - 1.0) > SIMPLEX_TOL:
            raise InvalidVectorError(
                f"simplex vector sums to {total!r}, expected 1 within {SIMPLEX_TOL}"
            )
        object.__setattr__(self, "entries", _freeze(arr))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class OpinionVector:
    """Vector of opinions, one per agent, each in the unit interval.

    Construction tolerates float excursions up to 1e-12 outside [0, 1]
    (convex combinations round that far) and clips them back exactly.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = _as_vector(self.entries, "opinion vector")
        if float(arr.min()) < -RANGE_TOL or float(arr.max()) > 1.0 + RANGE_TOL:
            raise InvalidVectorError(
                f"opinion values must lie in [0, 1]; got range "
                f"[{arr.min():.6g}, {arr.max():.6g}]"
            )
        object.__setattr__(self, "entries", _freeze(np.clip(arr, 0.0, 1.0)))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def dominant_left_eigenvector(
    matrix,
    shift: float = 0.0,
    tol: float = EIGEN_TOL,
    max_iter: int = EIGEN_MAX_ITER,
) -> SimplexVector:
    """Dominant left eigenvector of a nonnegative irreducible matrix.

    Power iteration on (M + shift*I)^T from the uniform vector, renormalized
    in 1-norm each step. The iteration matrix gets one extra unit on the
    diagonal internally: that leaves every left eigenvector unchanged while
    making the chain aperiodic, so periodic inputs (pure permutation
    patterns) still converge instead of cycling.

    Convergence requires both a step difference and the eigenvalue residual
    ||w^T M - lambda w^T||_inf at or below `tol`, with lambda estimated as
    w^T M 1 (exact for unit-row-sum inputs). The caller must supply a shift
    making M + shift*I nonnegative with a strongly connected positive
    pattern; reducible input yields either an iteration-limit error or a
    non-unique limit.
    """
    arr = _as_square_matrix(matrix)
    n = arr.shape[0]
    if not np.isfinite(shift) or shift < 0.0:
        raise StructuralError("shift must be a finite nonnegative real")
    shifted = arr + shift * np.eye(n)
    if float(shifted.min()) < 0.0:
        raise StructuralError("matrix + shift*I must be entrywise nonnegative")

    op = (shifted + np.eye(n)).T
    row_image = arr.sum(axis=1)  # M @ 1, used for the eigenvalue estimate
    w = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = op @ w
        nxt /= nxt.sum()
        diff = float(np.abs(nxt - w).max())
        w = nxt
        if diff <= tol:
            lam = float(w @ row_image)
            residual = float(np.abs(w @ arr - lam * w).max())
            if residual <= tol:
                return SimplexVector(w)
    lam = float(w @ row_image)
    residual = float(np.abs(w @ arr - lam * w).max())
    raise IterationLimitError(max_iter, residual)


def _gaussian_solve(matrix: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, int]:
    """Partial-pivot elimination shared by solve_linear and the consensus
    operator. `rhs` is 2-D (one column per system). Pivot ties go to the
    smallest row index (np.argmax returns the first maximum). Returns the
    solution and the column where the smallest pivot occurred."""
    a = matrix.copy()
    x = rhs.copy()
    n = a.shape[0]
    min_pivot = np.inf
    min_pivot_col = 0
    for col in range(n):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        pivot_mag = abs(a[piv, col])
        if pivot_mag <= PIVOT_TOL:
            raise SingularMatrixError(col, f"pivot magnitude {pivot_mag:.3e}")
        if pivot_mag < min_pivot:
            min_pivot = pivot_mag
            min_pivot_col = col
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            x[[col, piv]] = x[[piv, col]]
        factors = a[col + 1 :, col] / a[col, col]
        a[col + 1 :, col:] -= np.outer(factors, a[col, col:])
        x[col + 1 :] -= np.outer(factors, x[col])
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - a[i, i + 1 :] @ x[i + 1 :]) / a[i, i]
    return x, min_pivot_col


def solve_linear(matrix, rhs) -> np.ndarray:
    """Solve M z = b by Gaussian elimination with partial pivoting.

    Deterministic: pivot ties break to the smallest row index. A pivot with
    magnitude at or below 1e-13 raises SingularMatrixError naming the
    column, as does a solution whose multiply-back residual exceeds
    1e-10 * max(1, ||b||_inf).
    """
    arr = _as_square_matrix(matrix)
    b = _as_vector(rhs, "right-hand side")
    if b.shape[0] != arr.shape[0]:
        raise StructuralError(
            f"right-hand side length {b.shape[0]} does not match matrix order "
            f"{arr.shape[0]}"
        )
    z, min_pivot_col = _gaussian_solve(arr, b[:, None])
    z = z[:, 0]
    residual = float(np.abs(arr @ z - b).max())
    if residual > SOLVE_RESIDUAL_TOL * max(1.0, float(np.abs(b).max())):
        raise SingularMatrixError(
            min_pivot_col, f"multiply-back residual {residual:.3e} exceeds tolerance"
        )
    return z
