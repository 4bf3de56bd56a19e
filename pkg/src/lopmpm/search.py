"""Objective evaluation and insert-move local search.

Permutations are 0-based ``int64`` arrays: ``perm[k]`` is the row/column
index placed at position ``k``. An insert move ``(i, j)`` removes the element
at position ``i`` and reinserts it so that it ends up at position ``j``.

The change of objective for moving the element ``x = perm[i]`` telescopes
over the elements it jumps across::

    i < j:  sum_{h=i+1..j}   C[perm[h], x] - C[x, perm[h]]
    i > j:  sum_{h=j..i-1}   C[x, perm[h]] - C[perm[h], x]

so scanning ``j`` outward from ``i`` and accumulating yields every move of
row ``i`` in ``O(n)``, and the whole neighbourhood in ``O(n^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from numba import njit

from .instance import LopInstance


@dataclass(eq=False)
class Individual:
    """A permutation with its cached objective value."""

    perm: np.ndarray
    objective: int
    birth_generation: int = 0

    def key(self) -> tuple:
        return tuple(int(x) for x in self.perm)

    def __repr__(self):
        return (f"Individual(objective={self.objective}, "
                f"birth_generation={self.birth_generation}, n={len(self.perm)})")


class Move(NamedTuple):
    i: int
    j: int
    delta: int


def as_permutation(perm, n: Optional[int] = None) -> np.ndarray:
    """Validate ``perm`` as a bijection on ``0..n-1`` and return an int64 copy."""
    arr = np.array(perm, dtype=np.int64).ravel()
    if n is not None and arr.size != n:
        raise ValueError(f"permutation has length {arr.size}, expected {n}")
    if not np.array_equal(np.sort(arr), np.arange(arr.size)):
        raise ValueError("not a permutation of 0..n-1")
    return arr


def random_permutation(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.permutation(n).astype(np.int64)


def _check_positions(n: int, i: int, j: int) -> None:
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"positions ({i}, {j}) out of range for n={n}")
    if i == j:
        raise ValueError("insert positions must differ")


@njit(cache=True)
def _evaluate(w, perm):
    n = perm.shape[0]
    total = 0
    for a in range(n - 1):
        pa = perm[a]
        for b in range(a + 1, n):
            total += w[pa, perm[b]]
    return total


@njit(cache=True)
def _insert_inplace(perm, i, j):
    x = perm[i]
    if i < j:
        for h in range(i, j):
            perm[h] = perm[h + 1]
    else:
        for h in range(i, j, -1):
            perm[h] = perm[h - 1]
    perm[j] = x


@njit(cache=True)
def _scan(skew, perm):
    # Returns (i, j, delta, evaluations); ties go to the smallest (i, j).
    # Left moves of row i are visited with j descending, so a tie within the
    # same row replaces the incumbent there; right moves need a strict gain.
    n = perm.shape[0]
    bi = -1
    bj = -1
    bd = np.iinfo(np.int64).min
    evals = 0
    for i in range(n):
        row = skew[perm[i]]
        acc = 0
        for j in range(i - 1, -1, -1):
            acc -= row[perm[j]]
            if acc > bd or (acc == bd and bi == i):
                bi = i
                bj = j
                bd = acc
        acc = 0
        for j in range(i + 1, n):
            acc += row[perm[j]]
            if acc > bd:
                bi = i
                bj = j
                bd = acc
        evals += n - 1
    return bi, bj, bd, evals


@njit(cache=True)
def _local_search(skew, perm, max_moves):
    # Steepest ascent in place; returns the list of applied deltas.
    applied = [0]
    applied.pop()
    while max_moves < 0 or len(applied) < max_moves:
        bi, bj, bd, _ = _scan(skew, perm)
        if bi < 0 or bd <= 0:
            break
        _insert_inplace(perm, bi, bj)
        applied.append(bd)
    return applied


def evaluate(inst: LopInstance, perm) -> int:
    """Objective value: the strict upper-triangle sum of the permuted matrix."""
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape != (inst.n,):
        raise ValueError(f"permutation length {perm.size} does not match n={inst.n}")
    return int(_evaluate(inst.weights, perm))


def apply_insert(perm, i: int, j: int) -> np.ndarray:
    """Return a copy of ``perm`` with the element at ``i`` moved to ``j``.

    >>> apply_insert([0, 1, 2, 3], 0, 2).tolist()
    [1, 2, 0, 3]
    >>> apply_insert([0, 1, 2, 3], 3, 1).tolist()
    [0, 3, 1, 2]
    """
    out = np.array(perm, dtype=np.int64)
    _check_positions(out.size, i, j)
    _insert_inplace(out, i, j)
    return out


def delta(inst: LopInstance, perm, i: int, j: int) -> int:
    """Objective change of ``apply_insert(perm, i, j)`` in ``O(|i - j|)``."""
    perm = np.asarray(perm, dtype=np.int64)
    _check_positions(perm.size, i, j)
    w = inst.weights
    x = perm[i]
    if i < j:
        between = perm[i + 1:j + 1]
        return int(w[between, x].sum() - w[x, between].sum())
    between = perm[j:i]
    return int(w[x, between].sum() - w[between, x].sum())


def scan_best_move(inst: LopInstance, perm) -> Optional[Move]:
    """Best insert move of ``perm`` or ``None`` when no move improves.

    Among equally good moves the smallest ``(i, j)`` wins.
    """
    perm = np.asarray(perm, dtype=np.int64)
    bi, bj, bd, _ = _scan(inst.skew, perm)
    if bi < 0 or bd <= 0:
        return None
    return Move(int(bi), int(bj), int(bd))


def scan_evaluations(inst: LopInstance, perm) -> int:
    """Number of move evaluations one full neighbourhood scan performs."""
    return int(_scan(inst.skew, np.asarray(perm, dtype=np.int64))[3])


def local_search(inst: LopInstance, start, max_moves: Optional[int] = None,
                 birth_generation: int = 0, trajectory: Optional[list] = None) -> Individual:
    """Best-improvement insert local search from ``start``.

    Stops at a local optimum or after ``max_moves`` moves. When ``trajectory``
    is a list it receives the objective after each accepted move, starting
    with the objective of ``start``.
    """
    perm = np.array(start, dtype=np.int64)
    if perm.shape != (inst.n,):
        raise ValueError(f"permutation length {perm.size} does not match n={inst.n}")
    value = int(_evaluate(inst.weights, perm))
    applied = _local_search(inst.skew, perm, -1 if max_moves is None else int(max_moves))
    if trajectory is not None:
        trajectory.append(value)
        for d in applied:
            value += int(d)
            trajectory.append(value)
    else:
        value += int(sum(applied))
    return Individual(perm=perm, objective=value, birth_generation=birth_generation)
