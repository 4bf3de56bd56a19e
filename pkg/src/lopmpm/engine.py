"""Multi-parent memetic search for the linear ordering problem.

One generation breeds ``c`` offspring against the population as it stood at
the start of the generation. Each offspring comes from ``m`` parents that are
pairwise far apart (LCS distance), is recombined by multi-parent order
crossover, and is polished by insert local search. The pool update then keeps
the ``p`` best of parents plus offspring, ranked either by a quality/distance
score or by objective value alone. When the population's average objective
has not moved for ``g`` generations the population is rebuilt around the best
solution found so far.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, List, NamedTuple, Optional, Sequence

import numpy as np

from .diversity import diversity_from_matrix, nearest_distances, pairwise_distances, scores
from .instance import LopInstance
from .search import Individual, local_search, random_permutation

log = logging.getLogger(__name__)

SCORE_BASED = "score_based"
OVBS = "ovbs"
POOL_STRATEGIES = (SCORE_BASED, OVBS)


class ConfigError(ValueError):
    """Invalid solver configuration."""


@dataclass(frozen=True)
class SolverConfig:
    p: int = 25
    c: int = 10
    g: int = 30
    m: int = 3
    beta_range: tuple = (0.6, 0.7)
    alpha_range: tuple = (0.8, 1.0)
    pool_strategy: str = SCORE_BASED
    seed: int = 0
    max_generations: Optional[int] = 400
    time_limit: Optional[float] = None
    selection_retry_cap: int = 50

    def __post_init__(self):
        object.__setattr__(self, "beta_range", tuple(float(x) for x in self.beta_range))
        object.__setattr__(self, "alpha_range", tuple(float(x) for x in self.alpha_range))
        if self.p < 2:
            raise ConfigError(f"population size p must be at least 2, got {self.p}")
        if not 2 <= self.m <= self.p:
            raise ConfigError(f"parent count m must satisfy 2 <= m <= p (m={self.m}, p={self.p})")
        if self.c < 1:
            raise ConfigError(f"offspring count c must be positive, got {self.c}")
        if self.g < 1:
            raise ConfigError(f"stagnation limit g must be positive, got {self.g}")
        for label, (lo, hi) in (("beta", self.beta_range), ("alpha", self.alpha_range)):
            if not 0.0 <= lo <= hi <= 1.0:
                raise ConfigError(f"{label} range must satisfy 0 <= low <= high <= 1, got {(lo, hi)}")
        if self.pool_strategy not in POOL_STRATEGIES:
            raise ConfigError(f"unknown pool strategy {self.pool_strategy!r}")
        if self.selection_retry_cap < 1:
            raise ConfigError("selection_retry_cap must be positive")
        if self.max_generations is None and self.time_limit is None:
            raise ConfigError("need a generation budget or a time limit")
        if self.max_generations is not None and self.max_generations < 0:
            raise ConfigError("max_generations must be non-negative")
        if self.time_limit is not None and self.time_limit < 0:
            raise ConfigError("time_limit must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["beta_range"] = list(self.beta_range)
        d["alpha_range"] = list(self.alpha_range)
        return d

    def digest(self) -> str:
        """Hash of every setting except the seed."""
        d = self.as_dict()
        d.pop("seed")
        blob = json.dumps(d, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


@dataclass
class Population:
    members: List[Individual]
    generation: int = 0
    stagnation_count: int = 0
    last_total: Optional[int] = None
    distances: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def total_objective(self) -> int:
        return sum(ind.objective for ind in self.members)

    @property
    def average_objective(self) -> Fraction:
        return Fraction(self.total_objective, len(self.members))

    def distance_matrix(self) -> np.ndarray:
        if self.distances is None or self.distances.shape[0] != len(self.members):
            self.distances = pairwise_distances(self.members)
        return self.distances

    def diversity(self) -> float:
        return diversity_from_matrix(self.distance_matrix())


@dataclass
class BestTracker:
    best: Optional[Individual] = None
    time_to_best: float = 0.0
    generation_of_best: int = 0

    def offer(self, ind: Individual, generation: int, elapsed: float) -> bool:
        if self.best is None or ind.objective > self.best.objective:
            self.best = ind
            self.time_to_best = elapsed
            self.generation_of_best = generation
            return True
        return False


@dataclass
class GenerationRecord:
    generation: int
    best_objective: int
    average_objective: float
    diversity: float
    stagnation: int
    selection_fallbacks: int
    restart: bool
    elapsed_ms: float


@dataclass
class RunTrace:
    records: List[GenerationRecord] = field(default_factory=list)
    restarts: int = 0
    selection_fallbacks: int = 0

    @property
    def generations(self) -> int:
        return len(self.records)


class Selection(NamedTuple):
    indices: List[int]
    parents: List[Individual]
    reconstructions: int
    fallback: bool


def _fresh_individual(inst: LopInstance, rng: np.random.Generator, generation: int) -> Individual:
    return local_search(inst, random_permutation(inst.n, rng), birth_generation=generation)


def init_population(inst: LopInstance, cfg: SolverConfig, rng: np.random.Generator) -> Population:
    """``p`` random permutations, each driven to an insert local optimum."""
    members = [_fresh_individual(inst, rng, 0) for _ in range(cfg.p)]
    pop = Population(members=members)
    pop.last_total = pop.total_objective
    return pop


def select_parents(pool, m: int, beta: float, rng: np.random.Generator,
                   retry_cap: int = 50) -> Selection:
    """Pick ``m`` distinct members whose pairwise LCS distances are all at
    least ``beta`` times the population diversity.

    Members are drawn at random among those still admissible; when none is
    left the partial set is discarded and built again. After ``retry_cap``
    such reconstructions ``m`` distinct members are drawn uniformly instead and
    the result is flagged as a fallback.
    """
    pop = pool if isinstance(pool, Population) else Population(members=list(pool))
    members = pop.members
    size = len(members)
    if not 2 <= m <= size:
        raise ValueError(f"cannot select {m} parents from a pool of {size}")
    dist = pop.distance_matrix()
    threshold = beta * diversity_from_matrix(dist)
    # far[k] has bit t set when member t may sit next to member k
    far = [sum(1 << t for t in np.flatnonzero(row >= threshold).tolist()) for row in dist]
    everyone = (1 << size) - 1
    reconstructions = 0
    while reconstructions < retry_cap:
        chosen: List[int] = []
        admissible = everyone
        while len(chosen) < m:
            # A uniform draw among admissible members equals redrawing at random until one fits.
            if not admissible:
                break
            candidates = [t for t in range(size) if admissible >> t & 1]
            k = candidates[int(rng.integers(len(candidates)))]
            chosen.append(k)
            admissible &= far[k] & ~(1 << k)
        if len(chosen) == m:
            return Selection(chosen, [members[k] for k in chosen], reconstructions, False)
        reconstructions += 1
    chosen = [int(k) for k in rng.choice(size, size=m, replace=False)]
    return Selection(chosen, [members[k] for k in chosen], reconstructions, True)


def recombine_mpc(parents: Sequence, rng: Optional[np.random.Generator] = None,
                  positions: Optional[Sequence[Sequence[int]]] = None,
                  drawn: Optional[list] = None) -> np.ndarray:
    """Multi-parent order-based crossover.

    The offspring starts as a copy of the first parent. For every further
    parent, ``n // m`` positions not used so far are chosen and the elements
    sitting there are rearranged into the relative order they have in that
    parent. With two parents this is the classic order-based crossover.

    ``positions`` replaces the random draws (one position list per donor
    parent); ``drawn``, when given, collects the position sets actually used.
    """
    perms = [np.asarray(x.perm if isinstance(x, Individual) else x, dtype=np.int64) for x in parents]
    m = len(perms)
    if m < 2:
        raise ValueError("need at least two parents")
    n = perms[0].size
    if any(p.size != n for p in perms):
        raise ValueError("parents differ in length")
    if positions is not None and len(positions) != m - 1:
        raise ValueError(f"expected {m - 1} position lists, got {len(positions)}")
    if positions is None and rng is None:
        raise ValueError("rng is required when positions are not given")

    child = perms[0].copy()
    k = n // m
    available = np.arange(n)
    rank = np.empty(n, dtype=np.int64)
    for idx, donor in enumerate(perms[1:]):
        if positions is not None:
            pos = np.sort(np.asarray(positions[idx], dtype=np.int64))
        else:
            pick = rng.choice(available.size, size=k, replace=False)
            pos = np.sort(available[pick])
            available = np.delete(available, pick)
        if drawn is not None:
            drawn.append(pos.copy())
        rank[donor] = np.arange(n)
        elems = child[pos]
        child[pos] = elems[np.argsort(rank[elems], kind="stable")]
    return child


def recombine_ob(first, second, rng: Optional[np.random.Generator] = None,
                 positions: Optional[Sequence[int]] = None) -> np.ndarray:
    """Two-parent order-based crossover (``recombine_mpc`` with ``m = 2``)."""
    return recombine_mpc([first, second], rng, None if positions is None else [positions])


def _survivor_order(merged: Sequence[Individual], key_scores: Optional[np.ndarray]) -> List[int]:
    def key(k):
        ind = merged[k]
        tail = (-ind.objective, ind.birth_generation, k)
        return tail if key_scores is None else (-key_scores[k],) + tail
    return sorted(range(len(merged)), key=key)


def update_pool(pool: Population, offspring: Sequence[Individual], alpha: float,
                strategy: str = SCORE_BASED) -> Population:
    """Merge offspring into the pool and keep ``len(pool.members)`` survivors.

    ``score_based`` ranks the merged pool by ``alpha`` times normalised
    objective plus ``1 - alpha`` times normalised distance to the nearest
    other member; ``ovbs`` ranks by objective only. Ties fall back to higher
    objective, then earlier birth generation, then position in the merged list.
    """
    p = len(pool.members)
    merged = list(pool.members) + list(offspring)
    dist = pairwise_distances(merged)
    if strategy == SCORE_BASED:
        objectives = np.array([ind.objective for ind in merged], dtype=np.float64)
        order = _survivor_order(merged, scores(objectives, nearest_distances(dist), alpha))
    elif strategy == OVBS:
        order = _survivor_order(merged, None)
    else:
        raise ConfigError(f"unknown pool strategy {strategy!r}")
    keep = order[:p]
    return Population(
        members=[merged[k] for k in keep],
        generation=pool.generation,
        stagnation_count=pool.stagnation_count,
        last_total=pool.last_total,
        distances=dist[np.ix_(keep, keep)],
    )


def run(inst: LopInstance, cfg: SolverConfig,
        clock: Callable[[], float] = time.perf_counter,
        on_generation: Optional[Callable[[Population, GenerationRecord], None]] = None):
    """Run the memetic search and return ``(BestTracker, RunTrace)``.

    Every random draw comes from one generator seeded with ``cfg.seed``, so
    the result (apart from timings) is a function of instance and config.
    """
    rng = np.random.default_rng(cfg.seed)
    start = clock()
    tracker = BestTracker()
    trace = RunTrace()

    pop = init_population(inst, cfg, rng)
    elapsed = clock() - start
    for ind in pop.members:
        tracker.offer(ind, 0, elapsed)

    while True:
        elapsed = clock() - start
        if cfg.max_generations is not None and pop.generation >= cfg.max_generations:
            break
        if cfg.time_limit is not None and elapsed >= cfg.time_limit:
            break
        generation = pop.generation + 1
        pop.distance_matrix()

        offspring = []
        fallbacks = 0
        for _ in range(cfg.c):
            beta = rng.uniform(*cfg.beta_range)
            sel = select_parents(pop, cfg.m, beta, rng, cfg.selection_retry_cap)
            fallbacks += sel.fallback
            child = recombine_mpc(sel.parents, rng)
            ind = local_search(inst, child, birth_generation=generation)
            tracker.offer(ind, generation, clock() - start)
            offspring.append(ind)

        alpha = rng.uniform(*cfg.alpha_range)
        pop = update_pool(pop, offspring, alpha, cfg.pool_strategy)
        pop.generation = generation

        total = pop.total_objective
        pop.stagnation_count = pop.stagnation_count + 1 if total == pop.last_total else 0
        pop.last_total = total

        restarted = pop.stagnation_count >= cfg.g
        if restarted:
            log.debug("generation %d: restart after %d stagnant generations",
                      generation, pop.stagnation_count)
            members = [tracker.best]
            for _ in range(cfg.p - 1):
                ind = _fresh_individual(inst, rng, generation)
                tracker.offer(ind, generation, clock() - start)
                members.append(ind)
            pop = Population(members=members, generation=generation)
            pop.last_total = pop.total_objective
            trace.restarts += 1

        trace.selection_fallbacks += fallbacks
        record = GenerationRecord(
            generation=generation,
            best_objective=tracker.best.objective,
            average_objective=float(pop.average_objective),
            diversity=pop.diversity(),
            stagnation=pop.stagnation_count,
            selection_fallbacks=fallbacks,
            restart=restarted,
            elapsed_ms=(clock() - start) * 1000.0,
        )
        trace.records.append(record)
        if on_generation is not None:
            on_generation(pop, record)

    return tracker, trace
