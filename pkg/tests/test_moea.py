import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mitplan import _kernels
from mitplan.errors import InfeasibleError
from mitplan.model import make_scenario
from mitplan.moea import (
    Individual,
    MoeaParams,
    ParetoResult,
    crossover,
    dominates,
    init_population,
    mutate,
    non_dominated_sort,
    optimize,
    pick_solution,
    random_compositions,
    rank_and_crowd,
    repair,
    select_and_vary,
)
from mitplan.oracle import brute_force

from conftest import pareto_by_hand, reference_by_hand, scenarios


def ind(pc, tc, feasible=True, violation=0.0, alloc=(0,)):
    return Individual(alloc, float(pc), float(tc), feasible, float(violation))


def test_dominates():
    assert dominates(ind(22, 4), ind(25, 4))
    assert not dominates(ind(22, 4), ind(20, 8)) and not dominates(ind(20, 8), ind(22, 4))
    assert dominates(ind(30, 10), ind(5, 0, False, 1))
    assert dominates(ind(9, 9, False, 1), ind(1, 1, False, 2))
    assert not dominates(ind(1, 1), ind(1, 1))


def test_sort_identical_points():
    fronts = non_dominated_sort([ind(3, 3) for _ in range(5)])
    assert len(fronts) == 1 and all(p.rank == 0 for p in fronts[0])


def test_sort_chain():
    a, b, c = ind(1, 1), ind(2, 2), ind(3, 3)
    fronts = non_dominated_sort([c, a, b])
    assert fronts == [[a], [b], [c]]


def test_sort_reference_population():
    rows = reference_by_hand()
    pop = [ind(pc, tc, alloc=y) for y, pc, tc, _ in rows]
    fronts = non_dominated_sort(pop)
    expected = set(pareto_by_hand([(pc, tc) for _, pc, tc, _ in rows]))
    assert expected == {(27, 0), (22, 4), (20, 8)}
    assert {(p.pc, p.tc) for p in fronts[0]} == expected
    for front in fronts:
        assert not any(dominates(x, y) for x in front for y in front)


def test_sort_infeasible_after_feasible():
    pop = [ind(1, 1, False, 2), ind(9, 9), ind(0, 0, False, 1)]
    fronts = non_dominated_sort(pop)
    assert [[(p.pc, p.violation) for p in f] for f in fronts] == [[(9, 0)], [(0, 1)], [(1, 2)]]


def test_crowding_extremes_infinite():
    pop = [ind(0, 4), ind(1, 2), ind(3, 1), ind(4, 0)]
    non_dominated_sort(pop)
    assert pop[0].crowding == pop[3].crowding == float("inf")
    assert pop[1].crowding == pytest.approx(3 / 4 + 3 / 4)
    assert pop[2].crowding == pytest.approx(3 / 4 + 2 / 4)


def test_crossover_and_repair():
    c1, c2 = crossover((10, 0), (0, 10), [True, False], 10)
    assert sum(c1) == sum(c2) == 10
    assert repair((0, 0, 0), 7) == (3, 2, 2)
    assert repair((1, 1, 2), 8) == (2, 2, 4)
    assert repair((5, 5), 10) == (5, 5)


@given(st.lists(st.integers(0, 50), min_size=1, max_size=6), st.integers(0, 60))
def test_repair_properties(genome, total):
    out = repair(genome, total)
    assert sum(out) == total and min(out) >= 0
    s = sum(genome)
    if s:
        assert all(abs(o - g * total / s) < 1 for o, g in zip(out, genome))


def test_mutate_zero_order():
    assert mutate((0, 0), [(0, 0.3, 0.9), (1, 0.1, 0.1)], 0) == (0, 0)


def test_mutate_preserves_sum_on_fuzz():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(1, 6))
        total = int(rng.integers(0, 80))
        genome = random_compositions(n, total, 1, rng)[0]
        events = [(int(g), float(rng.random()), float(rng.random())) for g in rng.integers(0, n, 3)]
        out = mutate(genome, events, total)
        assert sum(out) == total and min(out) >= 0 and len(out) == n


def test_mutate_moves_bounded_amount():
    out = mutate((20, 0, 0), [(2, 0.0, 0.999)], 20)
    assert out == (18, 0, 2)  # at most max(1, 20 // 10) units per event


@st.composite
def genome_batch(draw):
    n = draw(st.integers(1, 5))
    total = draw(st.integers(0, 40))
    size = 2 * draw(st.integers(2, 12))
    seed = draw(st.integers(0, 2**32))
    rng = np.random.default_rng(seed)
    return np.array(random_compositions(n, total, size, rng), dtype=np.int64).reshape(size, n), total, seed


@given(genome_batch(), st.floats(0, 1), st.sampled_from([None, 0.0, 0.5, 1.0]), st.integers(2, 4))
def test_compiled_variation_matches_reference(batch, cx, mut, tsize):
    genomes, total, seed = batch
    size = genomes.shape[0]
    position = np.random.default_rng(seed + 1).permutation(size)
    p = MoeaParams(population_size=size, crossover_prob=cx, mutation_prob=mut, tournament_size=tsize)
    fast = select_and_vary(genomes, position, p, total, np.random.default_rng(seed), compiled=True)
    slow = select_and_vary(genomes, position, p, total, np.random.default_rng(seed), compiled=False)
    assert np.array_equal(fast, slow)
    assert (fast.sum(axis=1) == total).all() and (fast >= 0).all()


points = st.lists(
    st.tuples(st.sampled_from([0.0, 0.0, 0.0, 1.0, 2.0]), st.integers(0, 8).map(float), st.integers(0, 8).map(float)),
    min_size=1,
    max_size=40,
)


@given(points)
def test_compiled_ranking_matches_reference(pts):
    ranks, crowds = rank_and_crowd(pts)
    arr = np.array(pts, dtype=float)
    krank, kcrowd = _kernels.rank_crowd(arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy())
    assert krank.tolist() == ranks
    assert kcrowd.tolist() == crowds


@given(points)
def test_ranking_agrees_with_pairwise_domination(pts):
    pop = [ind(pc, tc, viol == 0, viol) for viol, pc, tc in pts]
    fronts = non_dominated_sort(pop)
    for r, front in enumerate(fronts):
        for p in front:
            assert not any(dominates(q, p) for f in fronts[r:] for q in f)
            if r:
                assert any(dominates(q, p) for q in fronts[r - 1])


def test_random_compositions_uniform():
    rng = np.random.default_rng(3)
    draws = random_compositions(2, 2, 30_000, rng)
    counts = {a: draws.count(a) / len(draws) for a in [(0, 2), (1, 1), (2, 0)]}
    assert sum(counts.values()) == 1
    assert all(abs(v - 1 / 3) < 0.015 for v in counts.values())


def test_init_population_edge_cases():
    p = MoeaParams(population_size=8)
    zero = make_scenario(0, [1], [[0], [0]], [1, 1])
    assert {i.allocation for i in init_population(zero, p, np.random.default_rng(0))} == {(0, 0)}
    single = make_scenario(7, [1], [[7]], [1])
    assert {i.allocation for i in init_population(single, p, np.random.default_rng(0))} == {(7,)}


def test_init_population_deterministic(reference):
    p = MoeaParams(seed=42)
    a = init_population(reference, p, np.random.default_rng(42))
    b = init_population(reference, p, np.random.default_rng(42))
    assert a == b and len(a) == 64
    assert all(sum(i.allocation) == 10 for i in a)


def test_init_population_infeasible():
    with pytest.raises(InfeasibleError):
        init_population(make_scenario(10, [1], [[3], [6]], [1, 1]), MoeaParams(), np.random.default_rng(0))


def test_optimize_reference(reference):
    result = optimize(reference, MoeaParams(seed=42))
    assert result.best_scalarized.total == 26
    assert result.best_scalarized.allocation == (8, 2)
    assert [(i.pc, i.tc) for i in result.front] == [(27, 0), (22, 4), (20, 8)]
    assert len(result.history) == 200


def test_optimize_zero_order():
    s = make_scenario(0, [1], [[1], [0]], [1, 5], max_trucks=0)
    result = optimize(s, MoeaParams(generations=3))
    assert [(i.allocation, i.pc, i.tc) for i in result.front] == [((0, 0), 0, 0)]
    assert result.best_scalarized.total == 0


def test_optimize_deterministic_across_workers(reference):
    s = make_scenario(12, [1, 2], [[3, 9], [8, 4], [2, 20]], [2, 3, 1.5], truck_capacity=5, max_trucks=3, unit_trip_cost=4)
    p = MoeaParams(seed=5, generations=40)
    base = optimize(s, p, workers=1).to_dict()
    assert optimize(s, p, workers=1).to_dict() == base
    assert optimize(s, p, workers=4).to_dict() == base


@settings(max_examples=25)
@given(scenarios(max_factories=3, max_order=10), st.integers(0, 1000))
def test_optimize_invariants(s, seed):
    try:
        oracle = brute_force(s)
    except InfeasibleError:
        return
    result = optimize(s, MoeaParams(population_size=16, generations=15, seed=seed))
    hist = [h for h in result.history if h is not None]
    assert hist == sorted(hist, reverse=True)
    assert not any(dominates(a, b) for a in result.front for b in result.front)
    assert all(m.feasible for m in result.front)
    if oracle.best_total is None:
        assert result.best_scalarized is None
        return
    if result.best_scalarized is not None:
        assert result.best_scalarized.total >= oracle.best_total - 1e-9
        assert all(result.best_scalarized.total <= m.total + 1e-9 for m in result.front)


def test_pick_solution(reference):
    result = optimize(reference, MoeaParams(seed=42))
    assert (pick_solution(result, "min-TC").pc, pick_solution(result, "min-TC").tc) == (27, 0)
    assert (pick_solution(result, "min-PC").pc, pick_solution(result, "min-PC").tc) == (20, 8)
    assert pick_solution(result, "min-total").allocation == (8, 2)
    single = ParetoResult([ind(1, 2, alloc=(1,))], None)
    assert all(pick_solution(single, pol).allocation == (1,) for pol in ("min-total", "min-PC", "min-TC"))
    with pytest.raises(ValueError):
        pick_solution(ParetoResult([], None))
    with pytest.raises(ValueError):
        pick_solution(result, "max-fun")


def test_pick_solution_tie_prefers_smaller_allocation():
    result = ParetoResult([ind(1, 1, alloc=(2, 0)), ind(1, 1, alloc=(0, 2))], None)
    assert pick_solution(result).allocation == (0, 2)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(population_size=3),
        dict(population_size=7),
        dict(generations=0),
        dict(crossover_prob=1.5),
        dict(mutation_prob=-0.1),
        dict(tournament_size=1),
        dict(seed=-1),
        dict(seed=2**64),
    ],
)
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        MoeaParams(**kwargs)
