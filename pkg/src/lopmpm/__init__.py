"""Multi-parent memetic algorithm for the linear ordering problem.

Permutations are 0-based numpy ``int64`` arrays throughout the library; the
command-line tool prints them 1-based.
"""

from .diversity import (ScoreWeights, distance_to_population, lcs_distance, pairwise_distances,
                        population_diversity, score_population)
from .engine import (OVBS, SCORE_BASED, BestTracker, ConfigError, Population, RunTrace,
                     SolverConfig, init_population, recombine_mpc, recombine_ob, run,
                     select_parents, update_pool)
from .instance import (GeneratorSpec, InstanceFormatError, LopInstance, generate_instance,
                       parse_instance, read_instance, save_instance, write_instance)
from .search import (Individual, Move, apply_insert, delta, evaluate, local_search,
                     scan_best_move)

__version__ = "0.1.0"

__all__ = [
    "BestTracker", "ConfigError", "GeneratorSpec", "Individual", "InstanceFormatError",
    "LopInstance", "Move", "OVBS", "Population", "RunTrace", "SCORE_BASED", "ScoreWeights",
    "SolverConfig", "apply_insert", "delta", "distance_to_population", "evaluate",
    "generate_instance", "init_population", "lcs_distance", "local_search", "pairwise_distances",
    "parse_instance", "population_diversity", "read_instance", "recombine_mpc", "recombine_ob",
    "run", "save_instance", "scan_best_move", "score_population", "select_parents",
    "update_pool", "write_instance",
]
