"""
Checking against exhaustive search
==================================

Up to n = 10 every ordering can be enumerated, which gives a ground truth
for small instances.
"""

from lopmpm import GeneratorSpec, SolverConfig, generate_instance, run
from lopmpm.oracle import exact_solve

for seed in range(5):
    inst = generate_instance(GeneratorSpec(n=8, seed=seed))
    optimum, witness = exact_solve(inst)
    tracker, _ = run(inst, SolverConfig(seed=seed, max_generations=50))
    print(seed, optimum, tracker.best.objective, witness + 1)
