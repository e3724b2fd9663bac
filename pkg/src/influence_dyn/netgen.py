"""Deterministic random network generation for experiments and test suites.

The generator guarantees strong connectivity by first laying down a random
Hamiltonian cycle, then adds each remaining off-diagonal edge independently
with the requested probability, assigns uniform (0, 1] weights, and
row-normalizes. Identical (n, density, seed) triples produce bit-identical
matrices on every platform because the PRNG is fixed (see SplitMix64) and
the draw order is specified below.
"""

from __future__ import annotations

import numpy as np

from .errors import StructuralError
from .netcore import InteractionMatrix

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """The splitmix64 generator (Steele, Lea and Flood's constants).

    state += 0x9E3779B97F4A7C15; z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
    output z ^ (z >> 31), all arithmetic mod 2^64.

    Chosen over numpy's generators so seeds stay portable to any
    reimplementation from this comment alone.
    """

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK64

    def next_uint64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_unit(self) -> float:
        """Uniform draw in the half-open interval (0, 1]."""
        return (self.next_uint64() + 1) / 2.0**64

    def next_below(self, bound: int) -> int:
        """Uniform-ish integer in [0, bound) via plain modulo (the bias at
        64 bits is irrelevant here; determinism is what matters)."""
        return self.next_uint64() % bound

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates from the top index down."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]


def generate_random_network(n: int, density: float, seed: int) -> InteractionMatrix:
    """Seeded strongly connected random interaction matrix.

    Draw order, fixed for reproducibility:
    1. shuffle [0..n-1] to pick the Hamiltonian cycle (one shuffle);
    2. one weight draw per cycle edge, in cycle order;
    3. scan remaining off-diagonal slots in row-major order; per slot one
       inclusion draw (kept iff <= density) and, if kept, one weight draw.

    density = 0 keeps only the guaranteed cycle; density = 1 yields the
    complete digraph. Output always passes interaction-matrix validation.
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise StructuralError(f"n must be an integer >= 2, got {n!r}")
    if not (0.0 <= density <= 1.0):
        raise StructuralError(f"density must lie in [0, 1], got {density!r}")
    rng = SplitMix64(seed)

    order = list(range(n))
    rng.shuffle(order)
    weights = np.zeros((n, n))
    for k in range(n):
        i, j = order[k], order[(k + 1) % n]
        weights[i, j] = rng.next_unit()
    for i in range(n):
        for j in range(n):
            if i == j or weights[i, j] > 0.0:
                continue
            if rng.next_unit() <= density:
                weights[i, j] = rng.next_unit()

    return InteractionMatrix(weights / weights.sum(axis=1)[:, None])
