"""Exception hierarchy shared by every module."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from mitplan.transport import TransportPlan


class MitError(Exception):
    """Base class for all planner errors."""


class ScenarioParseError(MitError):
    """Raised when scenario text is not well-formed JSON."""


class ValidationError(MitError, ValueError):
    """A value violates a type invariant. ``field`` names the offending field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


class AllocationError(ValidationError):
    pass


class InfeasibleError(MitError):
    """Total inventory of some material cannot cover the order."""

    def __init__(self, materials):
        self.materials = tuple(materials)
        super().__init__("insufficient total inventory for: " + ", ".join(self.materials))


class FleetExceededError(MitError):
    """A covering plan exists but needs more trucks than the fleet holds.

    The offending plan is kept on ``plan`` for diagnostics.
    """

    def __init__(self, plan: TransportPlan, max_trucks: int):
        self.plan = plan
        self.max_trucks = max_trucks
        super().__init__(f"plan needs {plan.total_trucks} trucks, fleet has {max_trucks}")


class InstanceTooLargeError(MitError):
    pass
