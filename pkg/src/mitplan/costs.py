"""Production cost, transport cost, and the combined PC + TC objective."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from mitplan.model import Allocation, Fleet, Scenario
from mitplan.transport import TransportPlan, build_greedy_plan, check_fleet


@dataclass(frozen=True)
class CostBreakdown:
    production: float
    transport: float

    @property
    def total(self) -> float:
        return self.production + self.transport

    def to_dict(self) -> dict[str, float]:
        return {"production": self.production, "transport": self.transport, "total": self.total}


@dataclass(frozen=True)
class Evaluation:
    """Everything the optimizer and the CLI need to know about one allocation."""

    allocation: Allocation
    plan: TransportPlan
    costs: CostBreakdown
    fleet_ok: bool
    violation: int  # trucks beyond the fleet limit

    def to_dict(self) -> dict[str, Any]:
        return {
            "allocation": list(self.allocation),
            "plan": self.plan.to_dict(),
            "costs": self.costs.to_dict(),
            "fleet_ok": self.fleet_ok,
            "violation": self.violation,
        }


def production_cost(s: Scenario, a: Sequence[int]) -> float:
    return math.fsum(pc * y for pc, y in zip(s.unit_costs, a))


def transport_cost(p: TransportPlan, fleet: Fleet) -> float:
    """Every truck trip costs the same flat fee, so TC is trips times fee."""
    return p.total_trucks * fleet.unit_trip_cost


def evaluate(s: Scenario, a: Sequence[int]) -> Evaluation:
    """Decode ``a`` with the greedy planner and price it.

    Fleet overflow does not raise here; it is reported through ``fleet_ok``
    and ``violation``. Aggregate infeasibility still raises.
    """
    alloc = tuple(int(y) for y in a)
    plan = build_greedy_plan(s, alloc)
    costs = CostBreakdown(production_cost(s, alloc), transport_cost(plan, s.fleet))
    ok = check_fleet(plan, s.fleet)
    return Evaluation(alloc, plan, costs, ok, max(0, plan.total_trucks - s.fleet.max_trucks))
