"""Exhaustive search over every allocation, for ground truth on small instances."""

from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Any

from mitplan.costs import evaluate
from mitplan.errors import InfeasibleError, InstanceTooLargeError
from mitplan.feasibility import infeasible_materials
from mitplan.model import Allocation, Scenario
from mitplan.parallel import ordered_map, thread_count

ENUMERATION_LIMIT = 10**6
# Totals this close to the minimum count as tied for best.
TIE_RTOL = 1e-9


@dataclass(frozen=True)
class FrontPoint:
    allocation: Allocation
    pc: float
    tc: float

    @property
    def total(self) -> float:
        return self.pc + self.tc

    def to_dict(self) -> dict[str, Any]:
        return {"allocation": list(self.allocation), "pc": self.pc, "tc": self.tc, "total": self.total}


@dataclass(frozen=True)
class OracleResult:
    best_total: float | None  # None when no allocation fits the fleet
    best_allocations: list[Allocation]
    exact_front: list[FrontPoint]
    evaluated_count: int
    points: list[FrontPoint] = field(default_factory=list, repr=False, compare=False)

    def to_dict(self) -> dict[str, Any]:
        best = None
        if self.best_allocations:
            best = next(p for p in self.points if p.allocation == self.best_allocations[0]).to_dict()
        return {
            "front": [p.to_dict() for p in self.exact_front],
            "best": best,
            "history": [],
            "best_total": self.best_total,
            "best_allocations": [list(a) for a in self.best_allocations],
            "evaluated_count": self.evaluated_count,
        }


def composition_count(n: int, total: int) -> int:
    return math.comb(total + n - 1, n - 1)


def enumerate_allocations(n: int, total: int, *, limit: int = ENUMERATION_LIMIT) -> Iterator[Allocation]:
    """Yield every split of ``total`` into ``n`` non-negative parts, lexicographically."""
    if n < 1 or total < 0:
        raise ValueError(f"need n >= 1 and total >= 0, got n={n}, total={total}")
    count = composition_count(n, total)
    if count > limit:
        raise InstanceTooLargeError(f"{count} allocations exceed the limit of {limit}")
    return _compositions(n, total)


def _compositions(n: int, total: int) -> Iterator[Allocation]:
    if n == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(n - 1, total - first):
            yield (first, *rest)


def pareto_filter(points: list[FrontPoint]) -> list[FrontPoint]:
    """Non-dominated subset under (pc, tc) minimization, ordered by tc, then pc, then allocation.

    Points with identical objectives are mutually non-dominated and all kept.
    """
    ordered = sorted(points, key=lambda p: (p.pc, p.tc, p.allocation))
    kept = []
    best_tc = math.inf
    i = 0
    while i < len(ordered):
        j = i
        while j < len(ordered) and ordered[j].pc == ordered[i].pc:
            j += 1
        group_tc = ordered[i].tc
        if group_tc < best_tc:
            kept.extend(p for p in ordered[i:j] if p.tc == group_tc)
            best_tc = group_tc
        i = j
    return sorted(kept, key=lambda p: (p.tc, p.pc, p.allocation))


def brute_force(s: Scenario, *, limit: int = ENUMERATION_LIMIT, workers: int | None = None) -> OracleResult:
    """Evaluate every allocation with the greedy decoder; fleet-infeasible ones are skipped."""
    bad = infeasible_materials(s)
    if bad:
        raise InfeasibleError(bad)
    allocations = list(enumerate_allocations(s.n, s.order, limit=limit))
    workers = thread_count(workers)
    chunk = max(1, math.ceil(len(allocations) / max(1, workers)))
    chunks = [allocations[i : i + chunk] for i in range(0, len(allocations), chunk)]

    def run(part):
        return [evaluate(s, a) for a in part]

    points = []
    for part in ordered_map(run, chunks, workers):
        points.extend(
            FrontPoint(e.allocation, e.costs.production, e.costs.transport)
            for e in part
            if e.fleet_ok
        )

    if not points:
        return OracleResult(None, [], [], len(allocations), [])
    best_total = min(p.total for p in points)
    cutoff = best_total + TIE_RTOL * max(1.0, abs(best_total))
    best = [p.allocation for p in points if p.total <= cutoff]
    return OracleResult(best_total, best, pareto_filter(points), len(allocations), points)
