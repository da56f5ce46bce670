"""Aggregate feasibility, the transport trigger, and the per-factory shortage report."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from mitplan.model import Scenario

if TYPE_CHECKING:
    from mitplan.transport import TransportPlan

Key = tuple[str, str]  # (factory id, material id)


@dataclass(frozen=True)
class ShortageReport:
    shortages: dict[Key, float]
    surpluses: dict[Key, float]
    transport_needed: bool
    affected_materials: frozenset[str]

    def to_dict(self, material_order: Sequence[str] | None = None) -> dict[str, Any]:
        affected = sorted(self.affected_materials)
        if material_order is not None:
            affected = [k for k in material_order if k in self.affected_materials]
        return {
            "shortages": [
                {"factory": f, "material": k, "qty": q} for (f, k), q in self.shortages.items()
            ],
            "surpluses": [
                {"factory": f, "material": k, "qty": q} for (f, k), q in self.surpluses.items()
            ],
            "transport_needed": self.transport_needed,
            "affected_materials": affected,
        }


def aggregate_feasible(s: Scenario) -> dict[str, bool]:
    """Per material: does the network as a whole hold enough to build the full order?"""
    return {
        k: math.fsum(row[col] for row in s.stock) >= s.order * s.recipe[col]
        for col, k in enumerate(s.material_ids)
    }


def infeasible_materials(s: Scenario) -> list[str]:
    return [k for k, ok in aggregate_feasible(s).items() if not ok]


def transport_needed(s: Scenario, a: Sequence[int]) -> bool:
    """True iff some factory lacks some material for its share of the order."""
    for i, row in enumerate(s.stock):
        for col, need in enumerate(s.recipe):
            if need * a[i] > row[col]:
                return True
    return False


def check_inventory(s: Scenario, a: Sequence[int]) -> ShortageReport:
    """Split every (factory, material) balance into a deficit or an excess.

    Zero balances land in neither map. Any factory holding a positive
    excess is a donor candidate for the materials in ``affected_materials``.
    """
    shortages: dict[Key, float] = {}
    surpluses: dict[Key, float] = {}
    for i, fid in enumerate(s.factory_ids):
        row = s.stock[i]
        for col, kid in enumerate(s.material_ids):
            need = s.recipe[col] * a[i]
            if need > row[col]:
                shortages[(fid, kid)] = need - row[col]
            elif need < row[col]:
                surpluses[(fid, kid)] = row[col] - need
    affected = frozenset(k for _, k in shortages)
    return ShortageReport(shortages, surpluses, bool(shortages), affected)


def delta_matrix(p: TransportPlan) -> list[list[bool]]:
    """Route indicator: entry [i][j] is set iff anything ships from factory i to j."""
    index = {fid: i for i, fid in enumerate(p.factory_ids)}
    n = len(p.factory_ids)
    out = [[False] * n for _ in range(n)]
    for (src, dst, _), qty in p.shipments.items():
        if qty > 0:
            out[index[src]][index[dst]] = True
    return out
