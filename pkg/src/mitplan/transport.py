"""Shipment planning: cover each factory's deficit from other factories' excess."""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from mitplan.errors import (
    FleetExceededError,
    InfeasibleError,
    InstanceTooLargeError,
    ValidationError,
)
from mitplan.feasibility import check_inventory, infeasible_materials
from mitplan.model import Fleet, Scenario

# Residual deficit tolerated after all donors are drained (float round-off only).
COVER_RTOL = 1e-9

Shipment = tuple[str, str, str]  # (from factory, to factory, material)
Route = tuple[str, str]


def trucks_for_route(total_quantity: float, capacity: float) -> int:
    """Trucks needed to carry ``total_quantity`` on one route: the exact ceiling of q / V."""
    if capacity <= 0:
        raise ValueError(f"capacity must be > 0, got {capacity}")
    if total_quantity < 0:
        raise ValueError(f"negative quantity {total_quantity}")
    if total_quantity == 0:
        return 0
    ratio = total_quantity / capacity
    if ratio != math.floor(ratio):
        return math.ceil(ratio)
    # The rounded quotient landed on an integer; settle it exactly.
    return math.ceil(Fraction(total_quantity) / Fraction(capacity))


@dataclass(frozen=True)
class TransportPlan:
    factory_ids: tuple[str, ...]
    shipments: dict[Shipment, float]
    route_trucks: dict[Route, int]
    total_trucks: int

    @classmethod
    def from_shipments(
        cls, factory_ids: Sequence[str], shipments: dict[Shipment, float], capacity: float
    ) -> TransportPlan:
        loads: dict[Route, list[float]] = {}
        for (src, dst, _), qty in shipments.items():
            loads.setdefault((src, dst), []).append(qty)
        order = {fid: i for i, fid in enumerate(factory_ids)}
        routes = sorted(loads, key=lambda r: (order[r[0]], order[r[1]]))
        route_trucks = {r: trucks_for_route(math.fsum(loads[r]), capacity) for r in routes}
        return cls(tuple(factory_ids), shipments, route_trucks, sum(route_trucks.values()))

    @classmethod
    def empty(cls, factory_ids: Sequence[str]) -> TransportPlan:
        return cls(tuple(factory_ids), {}, {}, 0)

    @property
    def is_empty(self) -> bool:
        return not self.shipments

    def to_dict(self) -> dict[str, Any]:
        return {
            "shipments": [
                {"from": src, "to": dst, "material": k, "qty": q}
                for (src, dst, k), q in self.shipments.items()
            ],
            "route_trucks": [
                {"from": src, "to": dst, "trucks": t} for (src, dst), t in self.route_trucks.items()
            ],
            "total_trucks": self.total_trucks,
        }


def check_fleet(p: TransportPlan, fleet: Fleet) -> bool:
    return p.total_trucks <= fleet.max_trucks


def build_greedy_plan(s: Scenario, a: Sequence[int]) -> TransportPlan:
    """Greedy covering plan, without the fleet-size check.

    Shortage factories are served in list order, materials in list order;
    each deficit is drawn from the donor with the most remaining excess
    (lowest factory index on ties).
    """
    bad = infeasible_materials(s)
    if bad:
        raise InfeasibleError(bad)
    report = check_inventory(s, a)
    if not report.shortages:
        return TransportPlan.empty(s.factory_ids)

    remaining = dict(report.surpluses)
    rank = {fid: i for i, fid in enumerate(s.factory_ids)}
    shipments: dict[Shipment, float] = {}
    for (dst, kid), deficit in report.shortages.items():
        need = deficit
        donors = [(f, q) for (f, k), q in remaining.items() if k == kid and q > 0]
        donors.sort(key=lambda d: (-d[1], rank[d[0]]))
        for src, avail in donors:
            if need <= 0:
                break
            take = min(need, avail)
            shipments[(src, dst, kid)] = take
            remaining[(src, kid)] = avail - take
            need -= take
        if need > COVER_RTOL * max(1.0, deficit):
            raise InfeasibleError([kid])
    return TransportPlan.from_shipments(s.factory_ids, shipments, s.fleet.truck_capacity)


def greedy_plan(s: Scenario, a: Sequence[int]) -> TransportPlan:
    """Deterministic covering plan; raises :class:`FleetExceededError` past the fleet limit."""
    plan = build_greedy_plan(s, a)
    if not check_fleet(plan, s.fleet):
        raise FleetExceededError(plan, s.fleet.max_trucks)
    return plan


def _on_grid(qty: float, resolution: float, name: str) -> int:
    units = qty / resolution
    whole = round(units)
    if abs(units - whole) > 1e-9 * max(1.0, abs(units)):
        raise ValidationError(name, f"{qty:g} is not a multiple of resolution {resolution:g}")
    return int(whole)


def _splits(total: int, caps: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Every way to write ``total`` as a sum with entry i in [0, caps[i]]."""
    if not caps:
        if total == 0:
            yield ()
        return
    rest_cap = sum(caps[1:])
    for first in range(max(0, total - rest_cap), min(total, caps[0]) + 1):
        for tail in _splits(total - first, caps[1:]):
            yield (first, *tail)


def exact_min_truck_plan(
    s: Scenario, a: Sequence[int], *, resolution: float = 1.0, limit: int = 100_000
) -> TransportPlan:
    """Brute-force the covering, surplus-only plan with the fewest trucks.

    Quantities are enumerated on a grid of ``resolution`` units. Ties go to
    fewer routes, then to the lexicographically smallest route list. Raises
    :class:`InstanceTooLargeError` once more than ``limit`` candidates appear.
    """
    bad = infeasible_materials(s)
    if bad:
        raise InfeasibleError(bad)
    report = check_inventory(s, a)
    idx = {fid: i for i, fid in enumerate(s.factory_ids)}
    tasks = [
        (dst, kid, _on_grid(q, resolution, f"deficit[{dst},{kid}]"))
        for (dst, kid), q in report.shortages.items()
    ]
    donors: dict[str, list[str]] = {}
    capacity: dict[tuple[str, str], int] = {}
    for (fid, kid), q in report.surpluses.items():
        donors.setdefault(kid, []).append(fid)
        capacity[(fid, kid)] = _on_grid(q, resolution, f"surplus[{fid},{kid}]")

    best_key = None
    best_ship: dict[Shipment, int] = {}
    seen = 0

    def search(t: int, ship: dict[Shipment, int]) -> None:
        nonlocal best_key, best_ship, seen
        if t == len(tasks):
            seen += 1
            if seen > limit:
                raise InstanceTooLargeError(f"more than {limit} candidate plans")
            loads: dict[tuple[int, int], int] = {}
            for (src, dst, _), u in ship.items():
                r = (idx[src], idx[dst])
                loads[r] = loads.get(r, 0) + u
            trucks = sum(trucks_for_route(u * resolution, s.fleet.truck_capacity) for u in loads.values())
            key = (trucks, len(loads), sorted(loads))
            if best_key is None or key < best_key:
                best_key, best_ship = key, dict(ship)
            return
        dst, kid, need = tasks[t]
        srcs = donors.get(kid, [])
        caps = [capacity[(f, kid)] for f in srcs]
        for split in _splits(need, caps):
            for f, u in zip(srcs, split):
                capacity[(f, kid)] -= u
                if u:
                    ship[(f, dst, kid)] = u
            search(t + 1, ship)
            for f, u in zip(srcs, split):
                capacity[(f, kid)] += u
                ship.pop((f, dst, kid), None)

    search(0, {})
    if best_key is None:
        raise InfeasibleError(sorted({k for _, k, _ in tasks}))
    shipments = {key: u * resolution for key, u in best_ship.items()}
    return TransportPlan.from_shipments(s.factory_ids, shipments, s.fleet.truck_capacity)
