"""Elitist non-dominated sorting GA over order allocations.

The genome is the allocation vector; its transport plan comes from the
greedy decoder. Objectives are (production cost, transport cost), both
minimized, and the fleet limit is handled by constraint domination.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import groupby
from typing import Any

import numpy as np

from mitplan import _kernels
from mitplan.costs import evaluate
from mitplan.errors import InfeasibleError
from mitplan.feasibility import infeasible_materials
from mitplan.model import Allocation, Scenario
from mitplan.parallel import ordered_map, thread_count

POLICIES = ("min-total", "min-PC", "min-TC")


@dataclass
class Individual:
    allocation: Allocation
    pc: float
    tc: float
    feasible: bool
    violation: float
    rank: int = 0
    crowding: float = 0.0

    @property
    def objectives(self) -> tuple[float, float]:
        return (self.pc, self.tc)

    @property
    def total(self) -> float:
        return self.pc + self.tc

    def to_dict(self) -> dict[str, Any]:
        return {"allocation": list(self.allocation), "pc": self.pc, "tc": self.tc, "total": self.total}


@dataclass(frozen=True)
class MoeaParams:
    population_size: int = 64
    generations: int = 200
    crossover_prob: float = 0.9
    mutation_prob: float | None = None  # None means 1/n per gene
    tournament_size: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ValueError("population_size must be even and >= 4")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError("crossover_prob must lie in [0, 1]")
        if self.mutation_prob is not None and not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must lie in [0, 1]")
        if self.tournament_size < 2:
            raise ValueError("tournament_size must be >= 2")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def gene_mutation_prob(self, n: int) -> float:
        return 1.0 / n if self.mutation_prob is None else self.mutation_prob


@dataclass
class ParetoResult:
    front: list[Individual]
    best_scalarized: Individual | None
    history: list[float | None] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "front": [ind.to_dict() for ind in self.front],
            "best": self.best_scalarized.to_dict() if self.best_scalarized else None,
            "history": self.history,
        }


# -- domination and sorting ---------------------------------------------------


def dominates(a: Individual, b: Individual) -> bool:
    """Constraint domination: feasibility first, then violation, then Pareto order."""
    if a.feasible != b.feasible:
        return a.feasible
    if not a.feasible:
        return a.violation < b.violation
    return a.pc <= b.pc and a.tc <= b.tc and (a.pc < b.pc or a.tc < b.tc)


Point = tuple[float, float, float]  # (violation, pc, tc)


def _fronts_2d(keys: list[Point]) -> tuple[dict[Point, int], dict[Point, float]]:
    """Rank and crowding for distinct points.

    Feasible points are swept in (pc, tc) order; each joins the first front
    whose newest member has a strictly larger tc, which is exactly the first
    front holding nothing that dominates it. Infeasible points form one
    front per violation level, after all feasible fronts.
    """
    feasible = sorted(k for k in keys if k[0] == 0)
    infeasible = sorted(k for k in keys if k[0] != 0)
    rank: dict[Point, int] = {}
    fronts: list[list[Point]] = []
    newest_tc: list[float] = []
    for key in feasible:
        f = bisect_right(newest_tc, key[2])
        if f == len(fronts):
            fronts.append([])
            newest_tc.append(key[2])
        else:
            newest_tc[f] = key[2]
        fronts[f].append(key)
        rank[key] = f
    crowd: dict[Point, float] = {}
    for members in fronts:
        # pc strictly rises and tc strictly falls along a feasible front
        last = len(members) - 1
        for i, key in enumerate(members):
            if i == 0 or i == last:
                crowd[key] = math.inf
            else:
                crowd[key] = (members[i + 1][1] - members[i - 1][1]) / (
                    members[last][1] - members[0][1]
                ) + (members[i - 1][2] - members[i + 1][2]) / (members[0][2] - members[last][2])
    base = len(fronts)
    for _, group in groupby(infeasible, key=lambda k: k[0]):
        members = list(group)
        for key in members:
            rank[key] = base
            crowd[key] = 0.0
        for obj in (1, 2):
            ordered = sorted(members, key=lambda k: (k[obj], k))
            span = ordered[-1][obj] - ordered[0][obj]
            for i, key in enumerate(ordered):
                if i == 0 or i == len(ordered) - 1:
                    crowd[key] = math.inf
                elif span > 0:
                    crowd[key] += (ordered[i + 1][obj] - ordered[i - 1][obj]) / span
        base += 1
    return rank, crowd


def rank_and_crowd(points: Sequence[Point]) -> tuple[list[int], list[float]]:
    """Front index and crowding distance for each (violation, pc, tc) point.

    Copies of a point share its rank; only the first copy carries its
    crowding distance, the rest get 0, so truncation keeps one of every
    distinct point before it keeps any duplicate.
    """
    urank, ucrowd = _fronts_2d(list(dict.fromkeys(points)))
    seen: set[Point] = set()
    ranks, crowds = [], []
    for key in points:
        ranks.append(urank[key])
        if key in seen:
            crowds.append(0.0)
        else:
            seen.add(key)
            crowds.append(ucrowd[key])
    return ranks, crowds


def _point(ind: Individual) -> Point:
    return (0.0 if ind.feasible else max(ind.violation, 5e-324), ind.pc, ind.tc)


def non_dominated_sort(pop: list[Individual]) -> list[list[Individual]]:
    """Partition ``pop`` into fronts, setting ``rank`` and ``crowding`` in place."""
    if not pop:
        return []
    ranks, crowds = rank_and_crowd([_point(p) for p in pop])
    fronts: list[list[Individual]] = [[] for _ in range(max(ranks) + 1)]
    for p, r, c in zip(pop, ranks, crowds):
        p.rank, p.crowding = r, c
        fronts[r].append(p)
    return fronts


def best_first(ranks: Sequence[int], crowds: Sequence[float]) -> list[int]:
    """Indices ordered by rank ascending, then crowding descending, then index."""
    return sorted(range(len(ranks)), key=lambda i: (ranks[i], -crowds[i], i))


# -- variation ----------------------------------------------------------------


def repair(genome: Sequence[int], total: int) -> tuple[int, ...]:
    """Rescale ``genome`` to sum to ``total`` by largest remainder (lower index wins ties).

    An all-zero genome is treated as uniform.
    """
    s = sum(genome)
    if s == total:
        return tuple(genome)
    if s == 0:
        genome, s = [1] * len(genome), len(genome)
    parts = [divmod(y * total, s) for y in genome]
    short = total - sum(q for q, _ in parts)
    lucky = sorted(range(len(parts)), key=lambda i: (-parts[i][1], i))[:short]
    out = [q for q, _ in parts]
    for i in lucky:
        out[i] += 1
    return tuple(out)


def crossover(
    a: Sequence[int], b: Sequence[int], swap: Sequence[bool], total: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Uniform crossover: genes where ``swap`` is set trade places; both children repaired."""
    if a == b or not any(swap):
        return tuple(a), tuple(b)
    c1 = [y if s else x for x, y, s in zip(a, b, swap)]
    c2 = [x if s else y for x, y, s in zip(a, b, swap)]
    return repair(c1, total), repair(c2, total)


def mutate(genome: Sequence[int], events: Sequence[tuple[int, float, float]], total: int) -> tuple[int, ...]:
    """Move units between factories; the sum is unchanged.

    Each event ``(gene, u_src, u_amt)`` pulls 1..max(1, total // 10) units
    into ``gene`` from a factory picked by ``u_src`` among the others holding
    stock. Events apply in order.
    """
    y = list(genome)
    n = len(y)
    if n < 2 or total == 0:
        return tuple(y)
    step = max(1, total // 10)
    for gene, u_src, u_amt in events:
        donors = [j for j in range(n) if j != gene and y[j] > 0]
        if not donors:
            continue
        src = donors[int(u_src * len(donors))]
        amount = min(1 + int(u_amt * step), y[src])
        y[src] -= amount
        y[gene] += amount
    return tuple(y)


def random_compositions(n: int, total: int, count: int, rng: np.random.Generator) -> list[Allocation]:
    """``count`` uniformly random splits of ``total`` into ``n`` parts (stars and bars)."""
    out = []
    for _ in range(count):
        bars = sorted(rng.choice(total + n - 1, size=n - 1, replace=False).tolist())
        edges = [-1, *bars, total + n - 1]
        out.append(tuple(hi - lo - 1 for lo, hi in zip(edges, edges[1:])))
    return out


def _draw(size: int, n: int, p: MoeaParams, rng: np.random.Generator):
    """All random numbers one generation of variation needs, in a fixed order."""
    entrants = rng.integers(0, size, size=(size, p.tournament_size))
    cross = rng.random(size // 2)
    swaps = rng.random((size // 2, n)) < 0.5
    fire = rng.random((size, n)) < p.gene_mutation_prob(n)
    u_src = rng.random((size, n))
    u_amt = rng.random((size, n))
    return entrants, cross, swaps, fire, u_src, u_amt


def select_and_vary(
    genomes: np.ndarray,
    position: np.ndarray,
    p: MoeaParams,
    total: int,
    rng: np.random.Generator,
    *,
    compiled: bool = True,
) -> np.ndarray:
    """Tournament selection, uniform crossover with repair, then mutation.

    ``position[i]`` is member i's place in the best-first ordering; the
    tournament entrant with the smaller position wins. ``compiled=False``
    runs the pure-Python operators above instead of the compiled kernel;
    both give identical offspring.
    """
    genomes = np.ascontiguousarray(genomes, dtype=np.int64)
    position = np.ascontiguousarray(position, dtype=np.int64)
    size, n = genomes.shape
    entrants, cross, swaps, fire, u_src, u_amt = _draw(size, n, p, rng)
    if compiled:
        return _kernels.vary(
            genomes, position, entrants, cross, swaps, fire, u_src, u_amt,
            float(p.crossover_prob), int(total),
        )

    pool = [tuple(g) for g in genomes.tolist()]
    pos = position.tolist()
    parents = [pool[min(row, key=pos.__getitem__)] for row in entrants.tolist()]
    children: list[tuple[int, ...]] = []
    for k in range(size // 2):
        a, b = parents[2 * k], parents[2 * k + 1]
        if cross[k] < p.crossover_prob:
            a, b = crossover(a, b, swaps[k].tolist(), total)
        children += [a, b]
    for row in range(size):
        events = [(g, float(u_src[row, g]), float(u_amt[row, g])) for g in np.flatnonzero(fire[row]).tolist()]
        if events:
            children[row] = mutate(children[row], events, total)
    return np.array(children, dtype=np.int64).reshape(size, n)


# -- driver -------------------------------------------------------------------


class _Evaluator:
    """Memoized decoding; allocations are pure inputs so results can be reused."""

    def __init__(self, s: Scenario, workers: int):
        self.s = s
        self.workers = workers
        self.cache: dict[Allocation, Point] = {}

    def __call__(self, genomes: np.ndarray) -> np.ndarray:
        """Rows of (violation, pc, tc), one per genome row."""
        keys = [tuple(g) for g in genomes.tolist()]
        fresh = [g for g in dict.fromkeys(keys) if g not in self.cache]
        if fresh:
            for g, ev in zip(fresh, ordered_map(lambda a: evaluate(self.s, a), fresh, self.workers)):
                self.cache[g] = (float(ev.violation), ev.costs.production, ev.costs.transport)
        return np.array([self.cache[g] for g in keys], dtype=float).reshape(len(keys), 3)


def _individual(genome: Allocation, point: Point, rank: int = 0, crowd: float = 0.0) -> Individual:
    viol, pc, tc = point
    return Individual(tuple(genome), float(pc), float(tc), viol == 0, float(viol), int(rank), float(crowd))


def init_population(
    s: Scenario, p: MoeaParams, rng: np.random.Generator, *, workers: int = 1
) -> list[Individual]:
    """Random initial population, evaluated and ranked."""
    bad = infeasible_materials(s)
    if bad:
        raise InfeasibleError(bad)
    genomes = random_compositions(s.n, s.order, p.population_size, rng)
    points = _Evaluator(s, workers)(np.array(genomes, dtype=np.int64).reshape(len(genomes), s.n))
    ranks, crowds = rank_and_crowd([tuple(pt) for pt in points.tolist()])
    return [_individual(*args) for args in zip(genomes, points.tolist(), ranks, crowds)]


def _sorted_best_first(genomes: np.ndarray, points: np.ndarray, keep: int):
    rank, crowd = _kernels.rank_crowd(points[:, 0].copy(), points[:, 1].copy(), points[:, 2].copy())
    order = np.lexsort((np.arange(rank.size), -crowd, rank))[:keep]
    return genomes[order], points[order], rank[order], crowd[order]


def optimize(s: Scenario, p: MoeaParams | None = None, *, workers: int | None = None) -> ParetoResult:
    """Run the (mu + lambda) elitist search and return the final front and best PC + TC."""
    p = p or MoeaParams()
    bad = infeasible_materials(s)
    if bad:
        raise InfeasibleError(bad)
    rng = np.random.default_rng(p.seed)
    evaluate_all = _Evaluator(s, thread_count(workers))
    size = p.population_size

    genomes = np.array(random_compositions(s.n, s.order, size, rng), dtype=np.int64).reshape(size, s.n)
    points = evaluate_all(genomes)
    genomes, points, rank, crowd = _sorted_best_first(genomes, points, size)

    best: tuple[float, Allocation] | None = None
    history: list[float | None] = []

    def track(gs: np.ndarray, ps: np.ndarray) -> None:
        nonlocal best
        ok = np.flatnonzero(ps[:, 0] == 0)
        if not ok.size:
            return
        totals = ps[ok, 1] + ps[ok, 2]
        low = totals.min()
        cand = min((float(low), tuple(gs[i].tolist())) for i in ok[totals == low])
        if best is None or cand < best:
            best = cand

    track(genomes, points)
    position = np.arange(size, dtype=np.int64)  # members are kept stored best-first
    for _ in range(p.generations):
        kids = select_and_vary(genomes, position, p, s.order, rng)
        kid_points = evaluate_all(kids)
        track(kids, kid_points)
        history.append(best[0] if best else None)
        genomes, points, rank, crowd = _sorted_best_first(
            np.concatenate([genomes, kids]), np.concatenate([points, kid_points]), size
        )

    front: dict[Allocation, Individual] = {}
    for g, pt, r, c in zip(genomes.tolist(), points.tolist(), rank.tolist(), crowd.tolist()):
        key = tuple(g)
        if r == 0 and pt[0] == 0 and key not in front:
            front[key] = _individual(key, pt, r, c)
    members = sorted(front.values(), key=lambda ind: (ind.tc, ind.pc, ind.allocation))

    best_ind = None if best is None else _individual(best[1], evaluate_all.cache[best[1]])
    return ParetoResult(members, best_ind, history)


def pick_solution(result: ParetoResult, policy: str = "min-total") -> Individual:
    """Choose one front member by a higher-level preference."""
    if not result.front:
        raise ValueError("empty front")
    keys = {
        "min-total": lambda ind: (ind.total, ind.allocation),
        "min-PC": lambda ind: (ind.pc, ind.allocation),
        "min-TC": lambda ind: (ind.tc, ind.allocation),
    }
    if policy not in keys:
        raise ValueError(f"unknown policy {policy!r}; choose from {', '.join(POLICIES)}")
    return min(result.front, key=keys[policy])
