"""Seeded random-instance builders shared across the test suites."""

from __future__ import annotations

import numpy as np

from influence_dyn import (
    CoefficientMap,
    CoefficientSchedule,
    InteractionMatrix,
    OpinionVector,
    SimplexVector,
    generate_random_network,
)

CYCLE3 = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=float)
# three nodes, all edges incident to node 1 (a star with that center)
STAR3 = np.array([[0, 1, 0], [0.5, 0, 0.5], [0, 1, 0]], dtype=float)


def random_network(rng: np.random.Generator, n: int | None = None,
                   lo: int = 3, hi: int = 10) -> InteractionMatrix:
    if n is None:
        n = int(rng.integers(lo, hi + 1))
    return generate_random_network(
        n, float(rng.uniform(0.1, 0.9)), int(rng.integers(0, 2**63))
    )


def random_bounded_map(rng: np.random.Generator, low: float, high: float) -> CoefficientMap:
    """Constant, affine or quadratic map whose range on [0, 1] stays inside
    [low, high] by construction."""
    span = high - low
    kind = int(rng.integers(3))
    if kind == 0:
        return CoefficientMap.constant(float(rng.uniform(low, high)))
    if kind == 1:
        c0 = float(rng.uniform(low, low + 0.6 * span))
        c1 = float(rng.uniform(-(c0 - low), high - c0))
        return CoefficientMap.affine(c0, c1)
    c0 = float(rng.uniform(low, low + 0.4 * span))
    c1 = float(rng.uniform(0.0, 0.5 * (high - c0)))
    c2 = float(rng.uniform(0.0, high - c0 - c1))
    return CoefficientMap.polynomial((c0, c1, c2))


def random_anchored_schedule(rng: np.random.Generator, n: int) -> CoefficientSchedule:
    """Anchored schedule with a_i + b_i <= 0.9 on [0, 1] (so the anchoring
    weights stay at least 0.1) and a random permutation."""
    a_maps, b_maps = [], []
    for _ in range(n):
        cap = float(rng.uniform(0.5, 0.9))
        split = float(rng.uniform(0.25, 0.75))
        a_maps.append(random_bounded_map(rng, 0.02, cap * split))
        b_maps.append(random_bounded_map(rng, 0.02, cap * (1.0 - split)))
    perm = tuple(int(i) for i in rng.permutation(n))
    return CoefficientSchedule.anchored(a_maps, b_maps, perm)


def random_averaging_schedule(rng: np.random.Generator, n: int) -> CoefficientSchedule:
    """Averaging schedule with self-weights bounded inside [0.05, 0.9], so
    the update matrix stays aperiodic and irreducible."""
    return CoefficientSchedule.averaging(
        [random_bounded_map(rng, 0.05, 0.9) for _ in range(n)]
    )


def identity_schedule(n: int) -> CoefficientSchedule:
    """The self-weight-is-the-appraisal schedule (a_i(x) = x)."""
    return CoefficientSchedule.averaging([CoefficientMap.identity()] * n)


def random_simplex(rng: np.random.Generator, n: int) -> SimplexVector:
    return SimplexVector(rng.dirichlet(np.ones(n)))


def random_opinions(rng: np.random.Generator, n: int) -> OpinionVector:
    return OpinionVector(rng.uniform(0.0, 1.0, n))


def random_doubly_stochastic(rng: np.random.Generator, n: int, extras: int = 3) -> InteractionMatrix:
    """Convex combination of derangement permutation matrices, always
    including the full cycle: doubly stochastic, zero diagonal, strongly
    connected."""
    mats = [np.roll(np.eye(n), 1, axis=1)]
    while len(mats) < extras + 1:
        perm = rng.permutation(n)
        if np.all(perm != np.arange(n)):
            mat = np.zeros((n, n))
            mat[np.arange(n), perm] = 1.0
            mats.append(mat)
    weights = rng.dirichlet(np.ones(len(mats)))
    return InteractionMatrix(sum(w * m for w, m in zip(weights, mats)))


def random_averaging_base(rng: np.random.Generator, n: int) -> np.ndarray:
    """Row-stochastic matrix with self-loops in [0, 0.8] and a strongly
    connected off-diagonal pattern, for exercising the model adapters."""
    base = random_network(rng, n)
    self_weight = rng.uniform(0.0, 0.8, n)
    return np.diag(self_weight) + (1.0 - self_weight)[:, None] * base.entries
