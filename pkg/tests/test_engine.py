import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_instance
from lopmpm import oracle
from lopmpm.diversity import ScoreWeights, lcs_distance, population_diversity, score_population
from lopmpm.engine import (OVBS, SCORE_BASED, ConfigError, Population, SolverConfig,
                           init_population, recombine_mpc, recombine_ob, run, select_parents,
                           update_pool)
from lopmpm.search import Individual, evaluate, scan_best_move


def ind(perm, objective=0, birth=0):
    return Individual(np.asarray(perm, dtype=np.int64), objective, birth)


def is_perm(x, n):
    return sorted(int(v) for v in x) == list(range(n))


# --- configuration ---------------------------------------------------------

def test_config_defaults():
    cfg = SolverConfig()
    assert (cfg.p, cfg.c, cfg.g, cfg.m) == (25, 10, 30, 3)
    assert cfg.beta_range == (0.6, 0.7)
    assert cfg.alpha_range == (0.8, 1.0)
    assert cfg.pool_strategy == SCORE_BASED
    assert cfg.selection_retry_cap == 50


@pytest.mark.parametrize("kwargs", [
    dict(m=1), dict(m=26), dict(p=1, m=2), dict(c=0), dict(g=0),
    dict(beta_range=(0.7, 0.6)), dict(alpha_range=(0.5, 1.2)),
    dict(pool_strategy="nope"), dict(max_generations=None, time_limit=None),
    dict(selection_retry_cap=0),
])
def test_config_rejects(kwargs):
    with pytest.raises(ConfigError):
        SolverConfig(**kwargs)


def test_config_digest_tracks_settings_not_seed():
    a = SolverConfig(seed=1)
    assert a.digest() == SolverConfig(seed=2).digest()
    assert a.digest() != SolverConfig(m=2).digest()


# --- recombination ---------------------------------------------------------

def test_ob_worked_example():
    # offspring positions 2,4,6 hold (3,5,4); their order in the second parent is (4,5,3)
    s1 = [1, 3, 2, 5, 6, 4]
    s2 = [4, 1, 5, 2, 6, 3]
    child = recombine_ob(np.array(s1) - 1, np.array(s2) - 1, positions=[1, 3, 5]) + 1
    assert child.tolist() == [1, 4, 2, 5, 6, 3]
    assert [child[1], child[3], child[5]] == [4, 5, 3]


def test_mpc_worked_example():
    # m=3, k=2: positions (2,4) hold (5,6), reordered per s2; then (5,6) hold (2,4), per s3
    s1 = np.array([1, 5, 3, 6, 2, 4]) - 1
    s2 = np.array([6, 1, 2, 3, 4, 5]) - 1
    s3 = np.array([4, 3, 2, 1, 6, 5]) - 1
    child = recombine_mpc([s1, s2, s3], positions=[[1, 3], [4, 5]]) + 1
    assert child.tolist() == [1, 6, 3, 5, 4, 2]


def test_mpc_identical_parents(rng):
    p = rng.permutation(30)
    for m in (2, 3, 4):
        assert np.array_equal(recombine_mpc([p] * m, rng), p)


def test_mpc_draw_sizes_disjoint(rng):
    for n in (1, 2, 7, 30, 31):
        for m in (2, 3, 4):
            drawn = []
            parents = [rng.permutation(n) for _ in range(m)]
            child = recombine_mpc(parents, rng, drawn=drawn)
            assert is_perm(child, n)
            assert len(drawn) == m - 1
            assert all(len(d) == n // m for d in drawn)
            flat = np.concatenate(drawn) if drawn else np.array([])
            assert len(set(flat.tolist())) == flat.size


def test_mpc_positions_outside_draws_keep_first_parent(rng):
    n, m = 20, 3
    parents = [rng.permutation(n) for _ in range(m)]
    drawn = []
    child = recombine_mpc(parents, rng, drawn=drawn)
    touched = set(np.concatenate(drawn).tolist())
    for k in range(n):
        if k not in touched:
            assert child[k] == parents[0][k]


def test_mpc_reordered_block_follows_last_donor(rng):
    n = 24
    parents = [rng.permutation(n) for _ in range(2)]
    drawn = []
    child = recombine_mpc(parents, rng, drawn=drawn)
    pos = drawn[0]
    rank = {int(v): k for k, v in enumerate(parents[1])}
    block = [rank[int(child[k])] for k in pos]
    assert block == sorted(block)


def test_mpc_errors(rng):
    with pytest.raises(ValueError):
        recombine_mpc([np.arange(3)], rng)
    with pytest.raises(ValueError):
        recombine_mpc([np.arange(3), np.arange(4)], rng)


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 50), m=st.integers(2, 6))
def test_mpc_always_permutation(seed, n, m):
    rng = np.random.default_rng(seed)
    parents = [rng.permutation(n) for _ in range(m)]
    assert is_perm(recombine_mpc(parents, rng), n)


# --- parent selection ------------------------------------------------------

def test_select_beta_zero_takes_first_draws(rng):
    pool = [ind(rng.permutation(10)) for _ in range(8)]
    sel = select_parents(pool, 3, 0.0, rng)
    assert not sel.fallback and sel.reconstructions == 0
    assert len(set(sel.indices)) == 3


def test_select_clones_any_selection_valid(rng):
    p = rng.permutation(10)
    pool = [ind(p) for _ in range(6)]
    sel = select_parents(pool, 4, 0.65, rng)
    assert not sel.fallback
    assert len(set(sel.indices)) == 4


def test_select_satisfies_threshold(rng):
    for _ in range(50):
        pool = [ind(rng.permutation(12)) for _ in range(10)]
        beta = rng.uniform(0.6, 0.7)
        sel = select_parents(pool, 3, beta, rng)
        threshold = beta * population_diversity(pool)
        if not sel.fallback:
            for a, b in itertools.combinations(sel.parents, 2):
                assert lcs_distance(a, b) >= np.ceil(threshold - 1e-9)


def test_select_fallback_after_retry_cap(rng):
    base = rng.permutation(15)
    pool = [ind(base) for _ in range(9)] + [ind(base[::-1])]
    sel = select_parents(pool, 3, 0.5, rng, retry_cap=7)
    assert sel.fallback
    assert sel.reconstructions == 7
    assert len(set(sel.indices)) == 3


def test_select_is_reproducible():
    pool = [ind(np.random.default_rng(k).permutation(12)) for k in range(10)]
    a = select_parents(pool, 3, 0.65, np.random.default_rng(5))
    b = select_parents(pool, 3, 0.65, np.random.default_rng(5))
    assert a.indices == b.indices


def test_select_rejects_bad_m(rng):
    pool = [ind(rng.permutation(5)) for _ in range(3)]
    with pytest.raises(ValueError):
        select_parents(pool, 4, 0.5, rng)


# --- pool update -----------------------------------------------------------

def random_pool(rng, size, n, births=0):
    return [ind(rng.permutation(n), int(rng.integers(0, 50)), births) for _ in range(size)]


def test_update_keeps_p(rng):
    pop = Population(random_pool(rng, 25, 12))
    offspring = random_pool(rng, 10, 12, births=1)
    for strategy in (SCORE_BASED, OVBS):
        assert len(update_pool(pop, offspring, 0.9, strategy).members) == 25


def test_update_alpha_one_equals_ovbs(rng):
    for _ in range(20):
        pop = Population(random_pool(rng, 25, 10))
        offspring = random_pool(rng, 10, 10, births=1)
        a = update_pool(pop, offspring, 1.0, SCORE_BASED).members
        b = update_pool(pop, offspring, 1.0, OVBS).members
        assert [id(x) for x in a] == [id(x) for x in b]


def test_update_ovbs_keeps_best_objectives(rng):
    pop = Population(random_pool(rng, 5, 8))
    offspring = random_pool(rng, 3, 8, births=1)
    survivors = update_pool(pop, offspring, 0.5, OVBS).members
    everything = sorted((x.objective for x in pop.members + offspring), reverse=True)
    assert sorted((x.objective for x in survivors), reverse=True) == everything[:5]


def test_update_demotes_clones():
    # a best member, three diverse but slightly worse members, three offered clones of the best
    base = np.arange(8)
    diverse = [base[::-1].copy(), np.array([1, 0, 3, 2, 5, 4, 7, 6]),
               np.array([4, 5, 6, 7, 0, 1, 2, 3])]
    pop = Population([ind(base, 100)] + [ind(p, 97) for p in diverse])
    clones = [ind(base.copy(), 100, 1) for _ in range(3)]
    merged = pop.members + clones
    nearest = [min(oracle.lcs_distance_dp(merged[k].perm, merged[t].perm)
                   for t in range(7) if t != k) for k in range(7)]
    assert nearest == [0, 6, 4, 4, 0, 0, 0]
    alpha = 0.3
    # f spans [97, 100] (denominator 4); distance spans [0, 6] (denominator 7)
    expected = [alpha * 3 / 4] + [(1 - alpha) * d / 7 for d in (6, 4, 4)] + [alpha * 3 / 4] * 3
    scores = score_population(merged, ScoreWeights(alpha))
    assert scores == pytest.approx(expected, rel=1e-12)
    survivors = update_pool(pop, clones, alpha, SCORE_BASED).members
    assert sum(s.key() == tuple(base) for s in survivors) == 1
    assert survivors[-1] is pop.members[0]
    # pure quality ranking keeps all four copies
    survivors_q = update_pool(pop, clones, 1.0, SCORE_BASED).members
    assert sum(s.key() == tuple(base) for s in survivors_q) == 4


def test_update_tie_break_birth_then_order():
    p = np.arange(6)
    pop = Population([ind(p, 5, 0), ind(p, 5, 0)])
    offspring = [ind(p, 5, 1), ind(p, 5, 1)]
    survivors = update_pool(pop, offspring, 0.8, SCORE_BASED).members
    assert survivors[0] is pop.members[0] and survivors[1] is pop.members[1]


def test_update_carries_survivor_distances(rng):
    pop = Population(random_pool(rng, 6, 9))
    new = update_pool(pop, random_pool(rng, 4, 9, 1), 0.9)
    from lopmpm.diversity import pairwise_distances
    assert np.array_equal(new.distances, pairwise_distances(new.members))


# --- population / run ------------------------------------------------------

def test_init_population(rng):
    inst = random_instance(rng, 8)
    cfg = SolverConfig(p=10)
    pop = init_population(inst, cfg, np.random.default_rng(3))
    again = init_population(inst, cfg, np.random.default_rng(3))
    assert [x.key() for x in pop.members] == [x.key() for x in again.members]
    opt = oracle.exact_solve(inst)[0]
    for x in pop.members:
        assert scan_best_move(inst, x.perm) is None
        assert x.objective == evaluate(inst, x.perm) <= opt


def test_run_trace_contract(rng):
    inst = random_instance(rng, 25)
    cfg = SolverConfig(seed=11, max_generations=60, g=5)
    seen = []

    def check(pop, record):
        assert len(pop.members) == cfg.p
        for x in pop.members:
            assert scan_best_move(inst, x.perm) is None
        seen.append(pop)

    tracker, trace = run(inst, cfg, on_generation=check)
    assert trace.generations == 60
    best = [r.best_objective for r in trace.records]
    assert all(b >= a for a, b in zip(best, best[1:]))
    assert tracker.best.objective == best[-1] == evaluate(inst, tracker.best.perm)
    n = inst.n
    assert all(0 <= r.diversity <= n - 1 for r in trace.records)
    assert trace.restarts == sum(r.restart for r in trace.records)
    assert trace.restarts >= 1
    for pop, r in zip(seen, trace.records):
        if r.restart:
            assert any(x is tracker.best or x.objective == r.best_objective for x in pop.members)


def test_restart_keeps_incumbent():
    # small instance stagnates quickly
    inst = random_instance(np.random.default_rng(1), 6)
    snapshots = []
    tracker, trace = run(inst, SolverConfig(seed=4, max_generations=40, g=3),
                         on_generation=lambda pop, rec: snapshots.append((rec, list(pop.members))))
    restarts = [(rec, members) for rec, members in snapshots if rec.restart]
    assert restarts
    for rec, members in restarts:
        assert rec.stagnation == 0
        assert max(x.objective for x in members) == rec.best_objective


def test_stagnation_counter_exact():
    inst = random_instance(np.random.default_rng(2), 7)
    records = []

    def hook(pop, rec):
        records.append((rec, pop.total_objective))

    run(inst, SolverConfig(seed=9, max_generations=25, g=1000), on_generation=hook)
    for (a, ta), (b, tb) in zip(records, records[1:]):
        if tb == ta:
            assert b.stagnation == a.stagnation + 1
        else:
            assert b.stagnation == 0


def test_run_deterministic(rng):
    inst = random_instance(rng, 20)
    cfg = SolverConfig(seed=123, max_generations=30)
    t1, r1 = run(inst, cfg)
    t2, r2 = run(inst, cfg)
    strip = lambda recs: [(r.generation, r.best_objective, r.average_objective, r.diversity,
                           r.stagnation, r.selection_fallbacks, r.restart) for r in recs]
    assert strip(r1.records) == strip(r2.records)
    assert t1.best.key() == t2.best.key()


def test_run_time_limit(rng):
    inst = random_instance(rng, 30)
    tracker, trace = run(inst, SolverConfig(seed=1, max_generations=None, time_limit=0.0))
    assert trace.generations == 0
    assert tracker.best is not None


def test_run_zero_generations(rng):
    inst = random_instance(rng, 10)
    tracker, trace = run(inst, SolverConfig(max_generations=0))
    assert trace.generations == 0 and tracker.best is not None


def test_run_tiny_instances():
    from lopmpm.instance import LopInstance
    tracker, _ = run(LopInstance("one", [[3]]), SolverConfig(max_generations=3))
    assert tracker.best.objective == 0
    tracker, _ = run(LopInstance("two", [[0, 1], [7, 0]]), SolverConfig(max_generations=3))
    assert tracker.best.objective == 7


def test_run_ovbs_equals_score_based_alpha_one(rng):
    inst = random_instance(rng, 20)
    base = dict(seed=77, max_generations=25, alpha_range=(1.0, 1.0))
    _, a = run(inst, SolverConfig(pool_strategy=SCORE_BASED, **base))
    _, b = run(inst, SolverConfig(pool_strategy=OVBS, **base))
    key = lambda r: (r.best_objective, r.average_objective, r.diversity, r.stagnation)
    assert [key(r) for r in a.records] == [key(r) for r in b.records]
