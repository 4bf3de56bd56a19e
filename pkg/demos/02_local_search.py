"""
Insert moves and local search
=============================

An insert move takes the element at position i and puts it at position j.
Its effect on the objective is known in O(|i - j|) without re-summing the
matrix, which makes a full neighbourhood scan O(n^2).
"""

import numpy as np

from lopmpm import apply_insert, delta, evaluate, generate_instance, GeneratorSpec, local_search
from lopmpm.oracle import naive_best_move

inst = generate_instance(GeneratorSpec(n=40, seed=2))
rng = np.random.default_rng(0)
perm = rng.permutation(inst.n)

f0 = evaluate(inst, perm)
moved = apply_insert(perm, 3, 17)
print("incremental:", delta(inst, perm, 3, 17))
print("recomputed: ", evaluate(inst, moved) - f0)

# steepest ascent until no insert move helps
trajectory = []
best = local_search(inst, perm, trajectory=trajectory)
print(f"{len(trajectory) - 1} moves, {trajectory[0]} -> {best.objective}")

# the brute-force scan agrees that nothing is left to gain
print("improving move left:", naive_best_move(inst, best.perm))
