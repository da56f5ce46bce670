"""Split a production order across factories and truck surplus material to where it is short."""

from mitplan.costs import CostBreakdown, Evaluation, evaluate, production_cost, transport_cost
from mitplan.errors import (
    AllocationError,
    FleetExceededError,
    InfeasibleError,
    InstanceTooLargeError,
    MitError,
    ScenarioParseError,
    ValidationError,
)
from mitplan.feasibility import (
    ShortageReport,
    aggregate_feasible,
    check_inventory,
    delta_matrix,
    transport_needed,
)
from mitplan.model import (
    Factory,
    Fleet,
    Material,
    Scenario,
    dump_scenario,
    load_scenario,
    make_scenario,
    validate_allocation,
)
from mitplan.moea import MoeaParams, ParetoResult, optimize, pick_solution
from mitplan.oracle import OracleResult, brute_force, enumerate_allocations
from mitplan.transport import (
    TransportPlan,
    check_fleet,
    exact_min_truck_plan,
    greedy_plan,
    trucks_for_route,
)

__version__ = "0.1.0"
