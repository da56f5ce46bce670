"""Random scenario generation for fuzzing and experiments."""

from __future__ import annotations

import numpy as np

from mitplan.model import Scenario, make_scenario

RECIPES = (0.0, 0.5, 1.0, 2.0, 3.0)
CAPACITIES = (1.0, 2.5, 5.0, 7.0, 10.0)
TRIP_COSTS = (0.0, 1.0, 4.0, 10.0)


def random_scenario(
    rng: np.random.Generator,
    *,
    max_factories: int = 5,
    max_materials: int = 4,
    max_order: int = 50,
    integral: bool = False,
    supply_range: tuple[float, float] = (0.6, 1.6),
    tight_fleet: float = 0.3,
) -> Scenario:
    """Draw one scenario.

    Total stock of each material is a random multiple (``supply_range``) of
    what the full order consumes, so a share of scenarios are infeasible.
    Quantities are multiples of 0.5, or whole numbers with ``integral``.
    With probability ``tight_fleet`` the truck limit is small enough to bind.
    """
    n = int(rng.integers(1, max_factories + 1))
    m = int(rng.integers(1, max_materials + 1))
    order = int(rng.integers(0, max_order + 1))
    grain = 1.0 if integral else 0.5

    recipe_pool = [r for r in RECIPES if r == int(r)] if integral else list(RECIPES)
    recipe = [float(rng.choice(recipe_pool)) for _ in range(m)]
    if not any(recipe):
        recipe[int(rng.integers(0, m))] = 1.0

    stock = np.zeros((n, m))
    for k in range(m):
        need = order * recipe[k]
        target = need * rng.uniform(*supply_range) + rng.uniform(0, 3)
        shares = rng.dirichlet(np.ones(n))
        stock[:, k] = np.round(target * shares / grain) * grain

    costs = [float(np.round(rng.uniform(1, 10) / grain) * grain) for _ in range(n)]
    capacity = float(rng.choice([c for c in CAPACITIES if not integral or c == int(c)]))
    trip = float(rng.choice(TRIP_COSTS))
    max_trucks = int(rng.integers(0, 4)) if rng.random() < tight_fleet else 1000
    return make_scenario(
        order,
        recipe,
        stock.tolist(),
        costs,
        truck_capacity=capacity,
        max_trucks=max_trucks,
        unit_trip_cost=trip,
    )


def scenario_corpus(seed: int, count: int, **kwargs) -> list[Scenario]:
    rng = np.random.default_rng(seed)
    return [random_scenario(rng, **kwargs) for _ in range(count)]
