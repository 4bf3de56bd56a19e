"""
A full memetic run
==================

Populations of local optima are recombined, polished and filtered on a
mix of quality and distance to the rest of the pool. Stagnation triggers a
restart around the best ordering found.
"""

from lopmpm import GeneratorSpec, SolverConfig, generate_instance, run

inst = generate_instance(GeneratorSpec(n=60, seed=11))
cfg = SolverConfig(seed=3, max_generations=40)


def show(pop, rec):
    if rec.generation % 10 == 0:
        print(f"gen {rec.generation:3d}  best {rec.best_objective}  "
              f"avg {rec.average_objective:.1f}  diversity {rec.diversity:.2f}")


tracker, trace = run(inst, cfg, on_generation=show)
print("best:", tracker.best.objective, "found in generation", tracker.generation_of_best)
print("restarts:", trace.restarts, "selection fallbacks:", trace.selection_fallbacks)

# comparing against pool updates that look at the objective alone
tracker2, _ = run(inst, SolverConfig(seed=3, max_generations=40, pool_strategy="ovbs"))
print("objective-only pool:", tracker2.best.objective)
