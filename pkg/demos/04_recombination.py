"""
Multi-parent recombination
==========================

The child starts as a copy of the first parent. Each further parent picks
n // m fresh positions and imposes its own relative order on the elements
found there. Two parents give order-based crossover.
"""

import numpy as np

from lopmpm import recombine_mpc, recombine_ob

# hand-picked positions make the operator easy to follow (0-based here)
s1 = np.array([1, 3, 2, 5, 6, 4]) - 1
s2 = np.array([4, 1, 5, 2, 6, 3]) - 1
print(recombine_ob(s1, s2, positions=[1, 3, 5]) + 1)

s3 = np.array([4, 3, 2, 1, 6, 5]) - 1
t1 = np.array([1, 5, 3, 6, 2, 4]) - 1
t2 = np.array([6, 1, 2, 3, 4, 5]) - 1
print(recombine_mpc([t1, t2, s3], positions=[[1, 3], [4, 5]]) + 1)

# random positions, recording which ones were used
rng = np.random.default_rng(5)
parents = [rng.permutation(12) for _ in range(4)]
drawn = []
child = recombine_mpc(parents, rng, drawn=drawn)
print(child)
print([p.tolist() for p in drawn])
