"""Truck count of the greedy decoder against the exact minimum on tiny instances."""

import argparse
from collections import Counter

import numpy as np

from mitplan.feasibility import aggregate_feasible, transport_needed
from mitplan.generators import random_scenario
from mitplan.transport import build_greedy_plan, exact_min_truck_plan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=200)
    ap.add_argument("--seed", type=int, default=6)
    ap.add_argument("--max-factories", type=int, default=3)
    ap.add_argument("--max-order", type=int, default=6)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    gaps = []
    while len(gaps) < args.instances:
        s = random_scenario(
            rng, max_factories=args.max_factories, max_materials=2, max_order=args.max_order,
            integral=True, supply_range=(1.0, 1.8),
        )
        if not all(aggregate_feasible(s).values()) or s.order == 0:
            continue
        cuts = sorted(rng.integers(0, s.order + 1, s.n - 1).tolist())
        a = tuple(b - c for c, b in zip([0, *cuts], [*cuts, s.order]))
        if not transport_needed(s, a):
            continue
        gaps.append(build_greedy_plan(s, a).total_trucks - exact_min_truck_plan(s, a).total_trucks)
    hist = Counter(gaps)
    print(f"equal on {hist[0] / len(gaps):.1%} of {len(gaps)} instances, mean gap {np.mean(gaps):.3f} trucks")
    for gap in sorted(hist):
        print(f"  gap {gap}: {hist[gap]}")


if __name__ == "__main__":
    main()
