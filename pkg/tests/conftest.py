import math
import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mitplan.model import make_scenario

settings.register_profile(
    "default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", deadline=None, max_examples=30)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


# -- acceptance criterion reporting ----------------------------------------------

_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    _CRITERIA.append((marker.args[0], report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, detail in sorted(_CRITERIA):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {label}" + (f"  ({detail})" if detail else ""))


# -- shared instances ------------------------------------------------------------

REF = dict(order=10, recipe=1.0, stock=(3.0, 8.0), pc=(2.0, 3.0), tc=4.0, capacity=5.0, trucks=10)


@pytest.fixture
def reference():
    """Two factories, one material: l=1, Y=10, L=(3,8), pc=(2,3), tc=4, V=5, r=10."""
    return make_scenario(
        REF["order"],
        [REF["recipe"]],
        [[q] for q in REF["stock"]],
        REF["pc"],
        truck_capacity=REF["capacity"],
        max_trucks=REF["trucks"],
        unit_trip_cost=REF["tc"],
    )


def reference_by_hand():
    """Enumerate the reference instance straight from the cost formulas.

    With one material and two factories every deficit has exactly one
    possible donor, so each allocation's truck count is forced.
    """
    rows = []
    for y1 in range(REF["order"] + 1):
        y = (y1, REF["order"] - y1)
        pc = sum(c * q for c, q in zip(REF["pc"], y))
        trucks = sum(
            math.ceil(max(0.0, REF["recipe"] * q - stock) / REF["capacity"])
            for q, stock in zip(y, REF["stock"])
        )
        rows.append((y, pc, trucks * REF["tc"], trucks))
    return rows


def pareto_by_hand(points):
    """Points (pc, tc) not dominated by any other point, by pairwise comparison."""
    keep = []
    for a in points:
        if not any(
            b[0] <= a[0] and b[1] <= a[1] and (b[0] < a[0] or b[1] < a[1]) for b in points
        ):
            keep.append(a)
    return keep


# -- hypothesis strategies ---------------------------------------------------------

halves = st.integers(0, 60).map(lambda v: v / 2)


@st.composite
def scenarios(draw, max_factories=4, max_materials=3, max_order=20):
    n = draw(st.integers(1, max_factories))
    m = draw(st.integers(1, max_materials))
    order = draw(st.integers(0, max_order))
    recipe = draw(st.lists(st.sampled_from([0.0, 0.5, 1.0, 2.0]), min_size=m, max_size=m))
    if not any(recipe):
        recipe[0] = 1.0
    stock = draw(st.lists(st.lists(halves, min_size=m, max_size=m), min_size=n, max_size=n))
    costs = draw(st.lists(halves, min_size=n, max_size=n))
    return make_scenario(
        order,
        recipe,
        stock,
        costs,
        truck_capacity=draw(st.sampled_from([1.0, 2.5, 5.0, 8.0])),
        max_trucks=draw(st.integers(0, 20)),
        unit_trip_cost=draw(halves),
    )


@st.composite
def compositions(draw, n, total):
    """A split of ``total`` into ``n`` non-negative parts."""
    cuts = sorted(draw(st.lists(st.integers(0, total), min_size=n - 1, max_size=n - 1)))
    edges = [0, *cuts, total]
    return tuple(b - a for a, b in zip(edges, edges[1:]))


@st.composite
def scenario_and_allocation(draw, **kwargs):
    s = draw(scenarios(**kwargs))
    return s, draw(compositions(s.n, s.order))
