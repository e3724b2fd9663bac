"""Domain types and numerical kernels: validation, connectivity, dominant
left eigenvectors and the pivoted linear solve."""

import itertools

import numpy as np
import pytest

from influence_dyn import (
    InteractionMatrix,
    InvalidMatrixError,
    InvalidVectorError,
    IterationLimitError,
    OpinionVector,
    SimplexVector,
    SingularMatrixError,
    StructuralError,
    dominant_left_eigenvector,
    solve_linear,
    strongly_connected,
    validate_interaction_matrix,
)
from support import CYCLE3, random_network


# ---------------------------------------------------------------------------
# validate_interaction_matrix


def test_cycle_passes_validation():
    report = validate_interaction_matrix(CYCLE3)
    assert report.ok
    assert report.violations == ()
    assert InteractionMatrix(CYCLE3).n == 3


def test_row_sum_violation_reports_row_and_magnitude():
    bad = np.array([[0, 1, 0], [0, 0, 1], [0.9, 0, 0]])
    report = validate_interaction_matrix(bad)
    assert not report.ok
    assert [v.check for v in report.violations] == ["row_sums"]
    violation = report.violations[0]
    assert violation.index == 2
    assert violation.magnitude == pytest.approx(0.1, abs=1e-15)


def test_unreachable_node_reports_connectivity():
    # edges 0->1, 1->0, 2->1: node 2 cannot be reached from the others
    bad = np.array([[0, 1, 0], [1, 0, 0], [0, 1, 0]], dtype=float)
    report = validate_interaction_matrix(bad)
    assert not report.ok
    checks = {v.check: v for v in report.violations}
    assert set(checks) == {"strong_connectivity"}
    assert checks["strong_connectivity"].index == 2
    assert checks["strong_connectivity"].magnitude == 1.0


def test_every_failed_check_is_listed():
    bad = np.array([[0.5, 0.5, 0], [0, -0.5, 1.5], [0, 0, 0.9]])
    report = validate_interaction_matrix(bad)
    assert {v.check for v in report.violations} == {
        "zero_diagonal",
        "nonnegative_entries",
        "row_sums",
        "strong_connectivity",
    }


@pytest.mark.parametrize(
    "matrix",
    [np.zeros((2, 3)), np.array([[np.nan, 1], [1, 0]]), np.zeros((1, 1)), np.zeros(3)],
)
def test_structural_problems_raise_instead_of_reporting(matrix):
    with pytest.raises(StructuralError):
        validate_interaction_matrix(matrix)


def test_invalid_matrix_error_carries_report():
    with pytest.raises(InvalidMatrixError) as err:
        InteractionMatrix(np.array([[0, 1.0], [0.9, 0.0]]))
    assert [v.check for v in err.value.report.violations] == ["row_sums"]


def test_interaction_matrix_is_read_only():
    matrix = InteractionMatrix(CYCLE3)
    with pytest.raises(ValueError):
        matrix.entries[0, 0] = 1.0


# ---------------------------------------------------------------------------
# strongly_connected


def test_cycle_is_strongly_connected():
    assert strongly_connected(CYCLE3)


def test_edgeless_digraph_is_not_strongly_connected():
    assert not strongly_connected(np.zeros((3, 3)))


def test_bidirectional_star_is_strongly_connected():
    star = np.zeros((4, 4))
    star[0, 1:] = 1.0
    star[1:, 0] = 1.0
    assert strongly_connected(star)


def test_negative_weights_are_structural():
    with pytest.raises(StructuralError):
        strongly_connected(np.array([[0, -1], [1, 0]]))


def _floyd_warshall_strongly_connected(adjacency: np.ndarray) -> bool:
    n = adjacency.shape[0]
    reach = adjacency.copy() | np.eye(n, dtype=bool)
    for k in range(n):
        for i in range(n):
            if reach[i, k]:
                reach[i] |= reach[k]
    return bool(reach.all())


@pytest.mark.parametrize("n", [2, 3, 4])
def test_agrees_with_transitive_closure_on_all_digraphs(n):
    slots = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in itertools.product([0, 1], repeat=len(slots)):
        adjacency = np.zeros((n, n), dtype=bool)
        for (i, j), bit in zip(slots, bits):
            adjacency[i, j] = bool(bit)
        expected = _floyd_warshall_strongly_connected(adjacency)
        assert strongly_connected(adjacency.astype(float)) == expected


# ---------------------------------------------------------------------------
# dominant_left_eigenvector


def test_cycle_has_uniform_left_eigenvector():
    w = dominant_left_eigenvector(CYCLE3)
    assert np.abs(w.entries - 1.0 / 3.0).max() <= 1e-12


def test_periodic_chain_still_converges():
    # bipartite pattern: plain successive powers of the transpose oscillate
    matrix = np.array([[0, 1, 0], [0.5, 0, 0.5], [0, 1, 0]])
    w = dominant_left_eigenvector(matrix)
    assert np.abs(w.entries - np.array([0.25, 0.5, 0.25])).max() <= 1e-12


def test_reducible_identity_is_out_of_contract():
    # the precondition excludes reducible input; accept either declared outcome
    try:
        w = dominant_left_eigenvector(np.eye(3))
    except IterationLimitError:
        return
    assert isinstance(w, SimplexVector)


def test_matches_dense_eigensolver_on_random_networks():
    rng = np.random.default_rng(41)
    for _ in range(25):
        matrix = random_network(rng).entries
        w = dominant_left_eigenvector(matrix)
        values, vectors = np.linalg.eig(matrix.T)
        lead = int(np.argmax(values.real))
        reference = np.abs(vectors[:, lead].real)
        reference /= reference.sum()
        assert np.abs(w.entries - reference).max() <= 1e-9
        assert np.abs(w.entries @ matrix - w.entries).max() <= 1e-12
        assert w.entries.min() > 0.0


def test_iteration_limit_reports_residual():
    slow = random_network(np.random.default_rng(99), 8).entries
    with pytest.raises(IterationLimitError) as err:
        dominant_left_eigenvector(slow, tol=1e-12, max_iter=2)
    assert np.isfinite(err.value.residual)
    assert err.value.iterations == 2


def test_negative_shifted_matrix_is_structural():
    with pytest.raises(StructuralError):
        dominant_left_eigenvector(np.array([[0.5, -0.5], [1.0, 0.0]]), shift=0.2)
    with pytest.raises(StructuralError):
        dominant_left_eigenvector(CYCLE3, shift=-1.0)


# ---------------------------------------------------------------------------
# solve_linear


def test_identity_system():
    b = np.array([0.2, 0.5, 0.3])
    assert np.array_equal(solve_linear(np.eye(3), b), b)


def test_diagonal_scaling():
    z = solve_linear(2.0 * np.eye(2), np.array([1.0, 3.0]))
    assert np.abs(z - np.array([0.5, 1.5])).max() <= 1e-15


def test_cycle_shift_system_matches_polynomial_inverse():
    # for the 3-cycle permutation, (aI - bP)^(-1) = (a^2 I + ab P + b^2 P^2) / (a^3 - b^3)
    a, b = 0.75, 0.25
    matrix = a * np.eye(3) - b * CYCLE3
    inverse = (a**2 * np.eye(3) + a * b * CYCLE3 + b**2 * (CYCLE3 @ CYCLE3)) / (a**3 - b**3)
    rhs = np.array([1.0, 0.0, 0.0])
    z = solve_linear(matrix, rhs)
    assert np.abs(z - inverse @ rhs).max() <= 1e-14
    assert np.abs(z - np.array([0.5625, 0.0625, 0.1875]) / 0.40625).max() <= 1e-14


def test_multiply_back_residual_on_random_well_conditioned_systems():
    rng = np.random.default_rng(1729)
    for _ in range(1000):
        n = int(rng.integers(2, 21))
        matrix = rng.uniform(-1.0, 1.0, (n, n)) + n * np.eye(n)  # diagonally dominant
        b = rng.uniform(-1.0, 1.0, n)
        z = solve_linear(matrix, b)
        assert np.abs(matrix @ z - b).max() <= 1e-10 * max(1.0, np.abs(b).max())


def test_singular_matrix_names_the_failing_column():
    with pytest.raises(SingularMatrixError) as err:
        solve_linear(np.array([[1.0, 2.0], [2.0, 4.0]]), np.array([1.0, 1.0]))
    assert err.value.column == 1
    assert "column 1" in str(err.value)


def test_solve_is_deterministic():
    rng = np.random.default_rng(5)
    matrix = rng.uniform(-1, 1, (8, 8)) + 8 * np.eye(8)
    b = rng.uniform(-1, 1, 8)
    first = solve_linear(matrix, b)
    second = solve_linear(matrix, b)
    assert np.array_equal(first, second)
    assert np.abs(first - np.linalg.solve(matrix, b)).max() <= 1e-12


def test_dimension_mismatch_is_structural():
    with pytest.raises(StructuralError):
        solve_linear(np.eye(3), np.ones(2))


# ---------------------------------------------------------------------------
# vector types


def test_simplex_vector_rejects_negative_and_bad_total():
    with pytest.raises(InvalidVectorError):
        SimplexVector(np.array([-0.1, 0.6, 0.5]))
    with pytest.raises(InvalidVectorError):
        SimplexVector(np.array([0.5, 0.6]))
    vec = SimplexVector(np.array([0.25, 0.75]))
    assert vec.n == 2


def test_opinion_vector_clips_only_float_dust():
    vec = OpinionVector(np.array([1.0 + 5e-13, -5e-14, 0.5]))
    assert vec.entries[0] == 1.0
    assert vec.entries[1] == 0.0
    with pytest.raises(InvalidVectorError):
        OpinionVector(np.array([1.1, 0.0]))
