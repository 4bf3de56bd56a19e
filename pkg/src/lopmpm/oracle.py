"""Brute-force reference implementations.

Nothing here imports the fast solver path; every function recomputes its
answer from the definitions so that it can serve as ground truth in tests.
Permutations and positions are 0-based, as everywhere in the package.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numba import njit

from .instance import LopInstance

EXACT_MAX_N = 10


class GuardError(ValueError):
    """Instance too large for exhaustive enumeration."""


@lru_cache(maxsize=64)
def _upper_pairs(n: int):
    return np.triu_indices(n, k=1)


def objective(inst: LopInstance, perm) -> int:
    """Sum of ``C[perm[a], perm[b]]`` over all position pairs ``a < b``."""
    perm = np.asarray(perm, dtype=np.intp)
    first, second = _upper_pairs(perm.size)
    return int(inst.weights[perm[first], perm[second]].sum())


def insert_list(perm, i: int, j: int) -> list[int]:
    if i == j:
        raise ValueError("insert positions must differ")
    seq = [int(x) for x in perm]
    if not (0 <= i < len(seq) and 0 <= j < len(seq)):
        raise IndexError(f"positions ({i}, {j}) out of range for n={len(seq)}")
    item = seq.pop(i)
    seq.insert(j, item)
    return seq


def naive_delta(inst: LopInstance, perm, i: int, j: int) -> int:
    """Objective change of moving the element at ``i`` to ``j``, by full recomputation."""
    return objective(inst, insert_list(perm, i, j)) - objective(inst, perm)


@njit(cache=True)
def _full_objective(w, perm):
    n = perm.shape[0]
    total = 0
    for a in range(n - 1):
        for b in range(a + 1, n):
            total += w[perm[a], perm[b]]
    return total


@njit(cache=True)
def _naive_scan(w, perm):
    n = perm.shape[0]
    base = _full_objective(w, perm)
    neighbour = np.empty(n, dtype=perm.dtype)
    bi, bj, bd = -1, -1, 0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            # rebuild the neighbour: drop position i, reinsert its element at j
            k = 0
            for h in range(n):
                if h == i:
                    continue
                if k == j:
                    k += 1
                neighbour[k] = perm[h]
                k += 1
            neighbour[j] = perm[i]
            d = _full_objective(w, neighbour) - base
            if bi < 0 or d > bd:
                bi, bj, bd = i, j, d
    return bi, bj, bd


def naive_best_move(inst: LopInstance, perm):
    """Best insert move by rebuilding and re-evaluating every neighbour.

    Returns ``(i, j, delta)`` for the first maximal move in ``(i, j)``
    lexicographic order when that maximum is positive, otherwise ``None``.
    """
    perm = np.ascontiguousarray(perm, dtype=np.int64)
    if perm.size < 2:
        return None
    i, j, d = _naive_scan(np.ascontiguousarray(inst.weights), perm)
    if d <= 0:
        return None
    return int(i), int(j), int(d)


def lcs_length(a, b) -> int:
    """Textbook quadratic dynamic program for the longest common subsequence."""
    a = list(a)
    b = list(b)
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0] * (len(b) + 1)
        for k, y in enumerate(b, start=1):
            if x == y:
                cur[k] = prev[k - 1] + 1
            else:
                cur[k] = cur[k - 1] if cur[k - 1] > prev[k] else prev[k]
        prev = cur
    return prev[-1]


def lcs_distance_dp(a, b) -> int:
    if len(a) != len(b):
        raise ValueError("permutations must have equal length")
    return len(a) - lcs_length(a, b)


@njit(cache=True)
def _enumerate_best(w):
    n = w.shape[0]
    perm = np.arange(n)
    best_val = np.iinfo(np.int64).min
    best_perm = perm.copy()
    while True:
        val = 0
        for a in range(n - 1):
            pa = perm[a]
            for b in range(a + 1, n):
                val += w[pa, perm[b]]
        if val > best_val:
            best_val = val
            best_perm[:] = perm
        # next lexicographic permutation
        k = n - 2
        while k >= 0 and perm[k] >= perm[k + 1]:
            k -= 1
        if k < 0:
            break
        t = n - 1
        while perm[t] <= perm[k]:
            t -= 1
        perm[k], perm[t] = perm[t], perm[k]
        lo, hi = k + 1, n - 1
        while lo < hi:
            perm[lo], perm[hi] = perm[hi], perm[lo]
            lo += 1
            hi -= 1
    return best_val, best_perm


def exact_solve(inst: LopInstance) -> tuple[int, np.ndarray]:
    """Exhaustive optimum over all ``n!`` orderings.

    Enumeration runs in lexicographic order and only strict improvements
    replace the incumbent, so the witness is the lexicographically smallest
    optimal permutation.
    """
    if inst.n > EXACT_MAX_N:
        raise GuardError(f"exhaustive search refused for n={inst.n} (limit {EXACT_MAX_N})")
    val, perm = _enumerate_best(np.ascontiguousarray(inst.weights))
    return int(val), perm.astype(np.int64)
