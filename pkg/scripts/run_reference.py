"""Solve the two-factory reference scenario with both the optimizer and the oracle."""

import argparse
import json
from pathlib import Path

from mitplan.model import load_scenario
from mitplan.moea import MoeaParams, optimize
from mitplan.oracle import brute_force

DEFAULT = Path(__file__).resolve().parents[1] / "scenarios" / "reference.json"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("scenario", nargs="?", type=Path, default=DEFAULT)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    s = load_scenario(args.scenario.read_bytes())
    oracle = brute_force(s)
    moea = optimize(s, MoeaParams(seed=args.seed))
    print(f"oracle: best {oracle.best_total} at {oracle.best_allocations} ({oracle.evaluated_count} allocations)")
    for p in oracle.exact_front:
        print(f"  front {p.allocation}  pc={p.pc:g}  tc={p.tc:g}  total={p.total:g}")
    best = moea.best_scalarized
    print(f"optimizer (seed {args.seed}): best {best.total:g} at {best.allocation}")
    print(json.dumps([(m.pc, m.tc) for m in moea.front]))


if __name__ == "__main__":
    main()
