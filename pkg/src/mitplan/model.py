"""Domain types, the scenario JSON format, and allocation validation."""

from __future__ import annotations

import json
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from mitplan.errors import AllocationError, ScenarioParseError, ValidationError

# Per-factory production quantities, one entry per factory in scenario order.
Allocation = tuple[int, ...]

MONEY_ATOL = 1e-9


@dataclass(frozen=True)
class Material:
    id: str
    per_unit: float


@dataclass(frozen=True)
class Factory:
    id: str
    unit_production_cost: float
    inventory: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class Fleet:
    truck_capacity: float
    max_trucks: int
    unit_trip_cost: float


@dataclass(frozen=True)
class Scenario:
    order: int
    materials: tuple[Material, ...]
    factories: tuple[Factory, ...]
    fleet: Fleet

    @property
    def n(self) -> int:
        return len(self.factories)

    @property
    def m(self) -> int:
        return len(self.materials)

    @cached_property
    def factory_ids(self) -> tuple[str, ...]:
        return tuple(f.id for f in self.factories)

    @cached_property
    def material_ids(self) -> tuple[str, ...]:
        return tuple(k.id for k in self.materials)

    @cached_property
    def recipe(self) -> tuple[float, ...]:
        return tuple(k.per_unit for k in self.materials)

    @cached_property
    def stock(self) -> tuple[tuple[float, ...], ...]:
        """Inventory as an n x m nested tuple, rows in factory order."""
        return tuple(tuple(f.inventory[k] for k in self.material_ids) for f in self.factories)

    @cached_property
    def unit_costs(self) -> tuple[float, ...]:
        return tuple(f.unit_production_cost for f in self.factories)


# -- validation helpers -------------------------------------------------------


def _number(value: Any, name: str, *, minimum: float = 0.0, strict: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(name, f"expected a number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(name, "must be finite")
    if value < minimum or (strict and value == minimum):
        op = ">" if strict else ">="
        raise ValidationError(name, f"must be {op} {minimum:g}, got {value:g}")
    return value


def _integer(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(name, f"expected an integer, got {type(value).__name__}")
    if value < 0:
        raise ValidationError(name, f"must be >= 0, got {value}")
    return value


def _ident(value: Any, name: str) -> str:
    if not isinstance(value, str) or not value:
        raise ValidationError(name, "expected a non-empty string id")
    return value


def _object(value: Any, name: str) -> Mapping[str, Any]:
    if not isinstance(value, Mapping):
        raise ValidationError(name, "expected an object")
    return value


def _require(obj: Mapping[str, Any], key: str, prefix: str) -> Any:
    if key not in obj:
        raise ValidationError(f"{prefix}{key}", "missing")
    return obj[key]


def scenario_from_dict(doc: Any) -> Scenario:
    """Build a validated :class:`Scenario` from parsed JSON.

    Inventory entries absent from a factory are materialized as 0.
    """
    doc = _object(doc, "scenario")
    order = _integer(_require(doc, "order", ""), "order")

    raw_materials = _require(doc, "materials", "")
    if not isinstance(raw_materials, list) or not raw_materials:
        raise ValidationError("materials", "expected a non-empty list")
    materials = []
    for idx, raw in enumerate(raw_materials):
        where = f"materials[{idx}]"
        raw = _object(raw, where)
        materials.append(
            Material(
                id=_ident(_require(raw, "id", where + "."), where + ".id"),
                per_unit=_number(_require(raw, "per_unit", where + "."), where + ".per_unit"),
            )
        )
    material_ids = [k.id for k in materials]
    if len(set(material_ids)) != len(material_ids):
        raise ValidationError("materials", "duplicate material id")
    if not any(k.per_unit > 0 for k in materials):
        raise ValidationError("materials", "at least one material needs per_unit > 0")

    raw_factories = _require(doc, "factories", "")
    if not isinstance(raw_factories, list) or not raw_factories:
        raise ValidationError("factories", "expected a non-empty list")
    factories = []
    for idx, raw in enumerate(raw_factories):
        where = f"factories[{idx}]"
        raw = _object(raw, where)
        fid = _ident(_require(raw, "id", where + "."), where + ".id")
        cost = _number(
            _require(raw, "unit_production_cost", where + "."), where + ".unit_production_cost"
        )
        raw_inv = _object(raw.get("inventory", {}), where + ".inventory")
        inventory = {}
        for key, qty in raw_inv.items():
            if key not in material_ids:
                raise ValidationError(f"{where}.inventory.{key}", "unknown material id")
            inventory[key] = _number(qty, f"{where}.inventory.{key}")
        factories.append(
            Factory(fid, cost, {k: inventory.get(k, 0.0) for k in material_ids})
        )
    factory_ids = [f.id for f in factories]
    if len(set(factory_ids)) != len(factory_ids):
        raise ValidationError("factories", "duplicate factory id")

    raw_fleet = _object(_require(doc, "fleet", ""), "fleet")
    fleet = Fleet(
        truck_capacity=_number(
            _require(raw_fleet, "truck_capacity", "fleet."), "fleet.truck_capacity", strict=True
        ),
        max_trucks=_integer(_require(raw_fleet, "max_trucks", "fleet."), "fleet.max_trucks"),
        unit_trip_cost=_number(
            _require(raw_fleet, "unit_trip_cost", "fleet."), "fleet.unit_trip_cost"
        ),
    )
    return Scenario(order, tuple(materials), tuple(factories), fleet)


def load_scenario(raw: bytes | str) -> Scenario:
    """Parse and validate a scenario document (UTF-8 JSON)."""
    try:
        text = raw.decode("utf-8") if isinstance(raw, (bytes, bytearray)) else raw
        doc = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ScenarioParseError(f"malformed scenario: {exc}") from exc
    return scenario_from_dict(doc)


def scenario_to_dict(s: Scenario) -> dict[str, Any]:
    return {
        "order": s.order,
        "materials": [{"id": k.id, "per_unit": k.per_unit} for k in s.materials],
        "factories": [
            {
                "id": f.id,
                "unit_production_cost": f.unit_production_cost,
                "inventory": {k: f.inventory[k] for k in s.material_ids},
            }
            for f in s.factories
        ],
        "fleet": {
            "truck_capacity": s.fleet.truck_capacity,
            "max_trucks": s.fleet.max_trucks,
            "unit_trip_cost": s.fleet.unit_trip_cost,
        },
    }


def dump_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2)


def validate_allocation(s: Scenario, a: Sequence[int]) -> Allocation:
    """Check ``a`` is a split of the order over the factories; return it as a tuple."""
    if len(a) != s.n:
        raise AllocationError("allocation", f"expected {s.n} entries, got {len(a)}")
    for i, y in enumerate(a):
        if isinstance(y, bool) or int(y) != y:
            raise AllocationError(f"allocation[{i}]", "expected an integer")
        if y < 0:
            raise AllocationError(f"allocation[{i}]", f"negative entry {y}")
    total = sum(int(y) for y in a)
    if total != s.order:
        raise AllocationError("allocation", f"sum {total} != order {s.order} (sum ≠ Y)")
    return tuple(int(y) for y in a)


def proportional_allocation(s: Scenario) -> Allocation:
    """Split the order evenly, handing leftover units to the lowest-index factories."""
    base, extra = divmod(s.order, s.n)
    return tuple(base + (1 if i < extra else 0) for i in range(s.n))


def make_scenario(
    order: int,
    per_unit: Sequence[float],
    inventory: Sequence[Sequence[float]],
    unit_costs: Sequence[float],
    *,
    truck_capacity: float = 1.0,
    max_trucks: int = 0,
    unit_trip_cost: float = 0.0,
) -> Scenario:
    """Build a validated scenario from plain arrays; ids are ``f1..fn`` and ``k1..km``."""
    doc = {
        "order": order,
        "materials": [{"id": f"k{k + 1}", "per_unit": v} for k, v in enumerate(per_unit)],
        "factories": [
            {
                "id": f"f{i + 1}",
                "unit_production_cost": unit_costs[i],
                "inventory": {f"k{k + 1}": q for k, q in enumerate(row)},
            }
            for i, row in enumerate(inventory)
        ],
        "fleet": {
            "truck_capacity": truck_capacity,
            "max_trucks": max_trucks,
            "unit_trip_cost": unit_trip_cost,
        },
    }
    return scenario_from_dict(doc)
