"""Command-line front end.

Exit codes::

    0  success
    1  malformed scenario, validation error, or bad command-line usage
    2  scenario infeasible (some material short across all factories)
    3  check: at least one material fails aggregate feasibility
    4  plan: covering plan needs more trucks than the fleet holds
    5  oracle/compare: instance too large to enumerate
    6  compare: optimizer best differs from the oracle best
    7  scenario file unreadable
    8  unexpected internal error
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from mitplan.costs import evaluate
from mitplan.errors import (
    InfeasibleError,
    InstanceTooLargeError,
    ScenarioParseError,
    ValidationError,
)
from mitplan.feasibility import aggregate_feasible, check_inventory
from mitplan.model import load_scenario, proportional_allocation, validate_allocation
from mitplan.moea import MoeaParams, ParetoResult, optimize
from mitplan.oracle import OracleResult, brute_force

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INFEASIBLE = 2
EXIT_CHECK_FAILED = 3
EXIT_FLEET = 4
EXIT_TOO_LARGE = 5
EXIT_GAP = 6
EXIT_IO = 7
EXIT_INTERNAL = 8

COMMANDS = ("check", "plan", "optimize", "oracle", "compare")
GAP_ATOL = 1e-9


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    scenario_path: Path
    allocation: tuple[int, ...] | None = None
    params: MoeaParams = MoeaParams()
    output_path: Path | None = None
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command == "plan" and self.allocation is None:
            raise UsageError("plan requires --alloc")
        if self.command == "oracle" and self.allocation is not None:
            raise UsageError("oracle does not take --alloc")
        if self.format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.format == "csv" and self.command not in ("optimize", "oracle"):
            raise UsageError("csv output is only available for optimize and oracle")


@dataclass
class Outcome:
    code: int
    report: str
    diagnostic: dict[str, Any] | None = None


def _json(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _front_csv(rows: list[dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["allocation", "pc", "tc", "total"])
    for row in rows:
        writer.writerow([";".join(map(str, row["allocation"])), row["pc"], row["tc"], row["total"]])
    return buf.getvalue()


def _render(doc: dict[str, Any], fmt: str) -> str:
    return _front_csv(doc["front"]) if fmt == "csv" else _json(doc)


def _compare(moea: ParetoResult, oracle: OracleResult) -> dict[str, Any]:
    moea_best = moea.best_scalarized.total if moea.best_scalarized else None
    if moea_best is None or oracle.best_total is None:
        gap = 0.0 if moea_best is None and oracle.best_total is None else None
    else:
        gap = moea_best - oracle.best_total
    moea_pts = sorted((ind.pc, ind.tc) for ind in moea.front)
    exact_pts = sorted({(p.pc, p.tc) for p in oracle.exact_front})
    return {
        "moea_best": moea_best,
        "oracle_best": oracle.best_total,
        "gap": gap,
        "front_match": sorted(set(moea_pts)) == exact_pts,
        "moea": moea.to_dict(),
        "oracle": oracle.to_dict(),
    }


def run(config: RunConfig) -> Outcome:
    """Execute one command. Never raises for expected error classes."""
    try:
        raw = Path(config.scenario_path).read_bytes()
    except OSError as exc:
        return Outcome(EXIT_IO, "", {"error": "io", "message": str(exc)})
    try:
        s = load_scenario(raw)
        if config.command == "check":
            verdict = aggregate_feasible(s)
            baseline = proportional_allocation(s)
            doc = {
                "feasible": verdict,
                "baseline_allocation": list(baseline),
                "report": check_inventory(s, baseline).to_dict(s.material_ids),
            }
            if all(verdict.values()):
                return Outcome(EXIT_OK, _json(doc))
            bad = [k for k, ok in verdict.items() if not ok]
            return Outcome(
                EXIT_CHECK_FAILED,
                _json(doc),
                {"error": "infeasible", "message": "insufficient total inventory", "materials": bad},
            )

        if config.command == "plan":
            alloc = validate_allocation(s, config.allocation)
            ev = evaluate(s, alloc)
            doc = ev.to_dict()
            if not ev.fleet_ok:
                return Outcome(
                    EXIT_FLEET,
                    _json(doc),
                    {
                        "error": "fleet_exceeded",
                        "message": f"plan needs {ev.plan.total_trucks} trucks, fleet has {s.fleet.max_trucks}",
                    },
                )
            return Outcome(EXIT_OK, _json(doc))

        if config.command == "optimize":
            return Outcome(EXIT_OK, _render(optimize(s, config.params).to_dict(), config.format))

        if config.command == "oracle":
            return Outcome(EXIT_OK, _render(brute_force(s).to_dict(), config.format))

        oracle = brute_force(s)
        doc = _compare(optimize(s, config.params), oracle)
        if doc["gap"] is not None and abs(doc["gap"]) <= GAP_ATOL:
            return Outcome(EXIT_OK, _json(doc))
        return Outcome(EXIT_GAP, _json(doc), {"error": "gap", "message": f"gap {doc['gap']}"})

    except ScenarioParseError as exc:
        return Outcome(EXIT_INVALID, "", {"error": "parse", "message": str(exc)})
    except ValidationError as exc:
        return Outcome(EXIT_INVALID, "", {"error": "validation", "field": exc.field, "message": str(exc)})
    except InfeasibleError as exc:
        return Outcome(
            EXIT_INFEASIBLE, "", {"error": "infeasible", "message": str(exc), "materials": list(exc.materials)}
        )
    except InstanceTooLargeError as exc:
        return Outcome(EXIT_TOO_LARGE, "", {"error": "instance_too_large", "message": str(exc)})


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mitplan", description="Material-inventory transportation planner.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("scenario", type=Path, help="scenario JSON file")
    parser.add_argument("--alloc", help="comma-separated per-factory quantities")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--pop", type=int, default=MoeaParams.population_size)
    parser.add_argument("--gens", type=int, default=MoeaParams.generations)
    parser.add_argument("--cx", type=float, default=MoeaParams.crossover_prob)
    parser.add_argument("--mut", type=float, default=None, help="per-gene mutation probability (default 1/n)")
    parser.add_argument("--out", type=Path, help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def _parse_alloc(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"--alloc expects comma-separated integers, got {text!r}") from None


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    try:
        params = MoeaParams(
            population_size=args.pop,
            generations=args.gens,
            crossover_prob=args.cx,
            mutation_prob=args.mut,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return RunConfig(
        command=args.command,
        scenario_path=args.scenario,
        allocation=_parse_alloc(args.alloc),
        params=params,
        output_path=args.out,
        format=args.format,
    )


def main(argv: list[str] | None = None) -> int:
    try:
        config = config_from_args(argv)
        outcome = run(config)
    except UsageError as exc:
        outcome = Outcome(EXIT_INVALID, "", {"error": "usage", "message": str(exc)})
        config = None
    except ValueError as exc:  # bad MITPLAN_THREADS and similar environment problems
        outcome = Outcome(EXIT_INVALID, "", {"error": "usage", "message": str(exc)})
        config = None
    except Exception as exc:  # noqa: BLE001
        outcome = Outcome(EXIT_INTERNAL, "", {"error": "internal", "message": repr(exc)})
        config = None

    if outcome.report:
        if config is not None and config.output_path is not None:
            config.output_path.write_text(outcome.report, encoding="utf-8")
        else:
            sys.stdout.write(outcome.report)
    if outcome.diagnostic is not None:
        sys.stderr.write(json.dumps(outcome.diagnostic) + "\n")
    return outcome.code

