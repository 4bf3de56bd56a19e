"""
Distances between orderings
===========================

Two permutations are as far apart as the number of elements outside their
longest common subsequence. The pool's diversity is the mean of all
pairwise distances.
"""

import numpy as np

from lopmpm import lcs_distance, pairwise_distances, population_diversity
from lopmpm.oracle import lcs_distance_dp

a = np.array([0, 2, 1, 3])
b = np.array([2, 0, 3, 1])
print(lcs_distance(a, b), lcs_distance_dp(a, b))

# a reversal shares only one element in order
print(lcs_distance(np.arange(10), np.arange(10)[::-1]))

rng = np.random.default_rng(1)
pool = [rng.permutation(30) for _ in range(8)]
print(pairwise_distances(pool))
print("diversity:", population_diversity(pool))

# clones pull it down
print("with clones:", population_diversity(pool[:2] + [pool[0]] * 6))
