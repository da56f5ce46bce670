"""How often the optimizer reaches the exact optimum on random small instances."""

import argparse
import time

import numpy as np

from mitplan.errors import InfeasibleError
from mitplan.generators import random_scenario
from mitplan.moea import MoeaParams, optimize
from mitplan.oracle import brute_force, composition_count


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=50)
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--gens", type=int, default=MoeaParams.generations)
    ap.add_argument("--pop", type=int, default=MoeaParams.population_size)
    ap.add_argument("--corpus-seed", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(args.corpus_seed)
    start = time.perf_counter()
    rates, done = [], 0
    while done < args.instances:
        s = random_scenario(rng, max_factories=3, max_materials=3, max_order=12)
        if composition_count(s.n, s.order) < 3:
            continue
        try:
            oracle = brute_force(s)
        except InfeasibleError:
            continue
        if oracle.best_total is None:
            continue
        done += 1
        hits = 0
        for seed in range(args.seeds):
            best = optimize(s, MoeaParams(population_size=args.pop, generations=args.gens, seed=seed)).best_scalarized
            hits += best is not None and abs(best.total - oracle.best_total) <= 1e-9 * max(1.0, oracle.best_total)
        rates.append(hits / args.seeds)
        print(f"instance {done:3d}  n={s.n} m={s.m} Y={s.order:2d}  match {rates[-1]:.2f}")
    print(f"mean match {np.mean(rates):.3f}  worst {min(rates):.2f}  ({time.perf_counter() - start:.0f} s)")


if __name__ == "__main__":
    main()
