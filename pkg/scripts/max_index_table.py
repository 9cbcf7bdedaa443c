"""Largest SIA index over all n x n zero patterns.

Exact enumeration for small n, random sampling beyond.  Prints one row per n
next to the companion-matrix lower bound n-1 and the upper bound n(n-1)/2.
"""

import argparse
import json
import time
from math import comb

from sarymsakov.classes import max_sia_index, pattern_space_size


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=5)
    ap.add_argument("--exact-limit", type=int, default=2_000_000, help="largest pattern space to enumerate")
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    rows = []
    for n in range(2, args.n_max + 1):
        exact = pattern_space_size(n) <= args.exact_limit
        t0 = time.perf_counter()
        rep = max_sia_index(n, mode="exact" if exact else "sampled",
                            budget=args.exact_limit if exact else args.samples,
                            seed=args.seed, workers=args.workers)
        rows.append({**rep.to_dict(), "lower": n - 1, "upper": comb(n, 2),
                     "seconds": round(time.perf_counter() - t0, 2)})

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'n':>2} {'mode':>7} {'patterns':>10} {'l':>3} {'n-1':>4} {'n(n-1)/2':>9} {'sec':>7}")
    for r in rows:
        print(f"{r['n']:>2} {r['mode']:>7} {r['patterns_examined']:>10} {r['l']:>3} "
              f"{r['lower']:>4} {r['upper']:>9} {r['seconds']:>7}")


if __name__ == "__main__":
    main()
