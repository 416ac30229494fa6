"""Compare the compiled and NumPy placement-scoring kernels.

Usage: python benchmarks/bench_planner.py [--lgas 64] [--candidates 40] [--k 3] [--repeat 3]

Scores every k-subset of candidate sites on a synthetic grid region, once
per backend, checks the scores are bit-identical and reports timings.
"""

import argparse
import itertools
import math
import time

import numpy as np

from caccess import EXAMPLE_FACTOR, Facility, Lga, Scenario, kernels
from caccess.planner import _factor_arrays


def grid_region(n_lgas, seed=0):
    rng = np.random.default_rng(seed)
    side = math.ceil(math.sqrt(n_lgas))
    lgas = [
        Lga(i + 1, f"L{i + 1}", int(rng.integers(10_000, 6_000_000)), ((i % side) * 150.0 - 600, (i // side) * 150.0 - 600))
        for i in range(n_lgas)
    ]
    return Scenario("bench", 529.1, 0.6, EXAMPLE_FACTOR, lgas, [Facility("H", (0.0, 0.0))])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lgas", type=int, default=64)
    ap.add_argument("--candidates", type=int, default=40)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    scenario = grid_region(args.lgas)
    rng = np.random.default_rng(1)
    sites = sorted(map(tuple, rng.uniform(-700, 700, (args.candidates, 2)).round(1).tolist()))
    base, cand = _factor_arrays(scenario, sites)
    total = math.comb(len(sites), args.k)
    combos = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(len(sites)), args.k)),
        dtype=np.intp,
        count=total * args.k,
    ).reshape(total, args.k)
    print(f"{args.lgas} LGAs, {args.candidates} candidates, k={args.k}: {total} placements")

    scores = {}
    timings = {}
    for backend in kernels.AVAILABLE:
        best = math.inf
        for _ in range(args.repeat):
            start = time.perf_counter()
            scores[backend] = kernels.combo_gini(base, cand, combos, scenario.multiplier_c, backend)
            best = min(best, time.perf_counter() - start)
        timings[backend] = best
        print(f"  {backend:<7} {best * 1e3:9.1f} ms   {total / best:12,.0f} placements/s")

    auto = "cython" if "cython" in kernels.AVAILABLE and args.lgas <= kernels.COMPILED_MAX_LGAS else "python"
    print(f"  default dispatch for {args.lgas} LGAs: {auto}")
    if len(scores) == 2:
        same = np.array_equal(scores["cython"], scores["python"])
        print(f"  speedup {timings['python'] / timings['cython']:.1f}x, identical scores: {same}")
        if not same:
            raise SystemExit(1)


if __name__ == "__main__":
    main()
