"""LCS distance between permutations and the quality-and-distance score.

For two permutations the longest common subsequence equals the longest
increasing subsequence of ``pos_b[a]`` (where ``pos_b`` is the inverse of
``b``), which patience sorting finds in ``O(n log n)``. The quadratic DP in
:mod:`lopmpm.oracle` pins this shortcut in the test-suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numba import njit

from .search import Individual


@dataclass(frozen=True)
class ScoreWeights:
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")


@njit(cache=True)
def _lcs_perm(a, b):
    n = a.shape[0]
    pos_b = np.empty(n, dtype=np.int64)
    for k in range(n):
        pos_b[b[k]] = k
    tails = np.empty(n, dtype=np.int64)
    length = 0
    for k in range(n):
        v = pos_b[a[k]]
        lo = 0
        hi = length
        while lo < hi:
            mid = (lo + hi) >> 1
            if tails[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        tails[lo] = v
        if lo == length:
            length += 1
    return length


@njit(cache=True)
def _pairwise(perms):
    m, n = perms.shape
    out = np.zeros((m, m), dtype=np.int64)
    for x in range(m):
        for y in range(x + 1, m):
            d = n - _lcs_perm(perms[x], perms[y])
            out[x, y] = d
            out[y, x] = d
    return out


def _perm(x) -> np.ndarray:
    if isinstance(x, Individual):
        x = x.perm
    return np.asarray(x, dtype=np.int64)


def lcs_distance(a, b) -> int:
    """``n`` minus the length of the longest common subsequence of ``a`` and ``b``.

    >>> lcs_distance([0, 1, 2, 3], [3, 2, 1, 0])
    3
    """
    a, b = _perm(a), _perm(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    return int(a.size - _lcs_perm(a, b))


def pairwise_distances(pool: Sequence) -> np.ndarray:
    """Symmetric matrix of LCS distances between all members of ``pool``."""
    perms = np.stack([_perm(x) for x in pool])
    return _pairwise(perms)


def distance_to_population(s, pool: Sequence, self_index: Optional[int] = None) -> int:
    """Minimum LCS distance from ``s`` to the members of ``pool``.

    The member at ``self_index`` is skipped; copies of ``s`` stored at other
    indices count and give distance 0.
    """
    s = _perm(s)
    best = None
    for k, member in enumerate(pool):
        if k == self_index:
            continue
        d = lcs_distance(s, member)
        if best is None or d < best:
            best = d
    if best is None:
        raise ValueError("pool has no member to measure distance against")
    return best


def nearest_distances(dist: np.ndarray) -> np.ndarray:
    """Per-row minimum of a pairwise distance matrix, ignoring the diagonal."""
    if dist.shape[0] < 2:
        raise ValueError("need at least two members")
    masked = dist.astype(np.float64, copy=True)
    np.fill_diagonal(masked, np.inf)
    return masked.min(axis=1).astype(np.int64)


def diversity_from_matrix(dist: np.ndarray) -> float:
    p = dist.shape[0]
    if p < 2:
        raise ValueError("diversity needs at least two members")
    total = int(np.triu(dist, k=1).sum())
    return total / (p * (p - 1) / 2)


def population_diversity(pool: Sequence) -> float:
    """Mean pairwise LCS distance over the pool."""
    if len(pool) < 2:
        raise ValueError("diversity needs at least two members")
    return diversity_from_matrix(pairwise_distances(pool))


def normalize(values) -> np.ndarray:
    """``(y - y_min) / (y_max - y_min + 1)``; always in ``[0, 1)``."""
    y = np.asarray(values, dtype=np.float64)
    lo, hi = y.min(), y.max()
    return (y - lo) / (hi - lo + 1.0)


def scores(objectives, nearest, alpha: float) -> np.ndarray:
    return alpha * normalize(objectives) + (1.0 - alpha) * normalize(nearest)


def score_population(pool: Sequence[Individual], weights: ScoreWeights) -> np.ndarray:
    """Score every member by normalised quality and distance to the rest of the pool."""
    if len(pool) < 2:
        raise ValueError("scoring needs at least two members")
    near = nearest_distances(pairwise_distances(pool))
    objectives = np.array([ind.objective for ind in pool], dtype=np.float64)
    return scores(objectives, near, weights.alpha)
