"""Breaker matrices for random SIA patterns that are not Sarymsakov.

For each n, samples patterns with SIA index >= 2, builds Q, and tallies how
often Q has index 1 versus 2 and whether both PQ and QP lose the SIA
property (they always should).
"""

import argparse
from collections import Counter

import numpy as np

from sarymsakov import classes as cl
from sarymsakov.construct import breaker
from sarymsakov.matrix import pattern_of


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", type=int, nargs="+", default=[3, 4, 5, 6, 7])
    ap.add_argument("--per-n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>2} {'cases':>6} {'idx(P)':>18} {'idx(Q)=1':>9} {'idx(Q)=2':>9} {'both broken':>12}")
    for n in args.ns:
        p_index, q_index, broken, found = Counter(), Counter(), 0, 0
        while found < args.per_n:
            p = cl.random_pattern(n, rng)
            idx = cl.sia_index(p)
            if idx is None or idx < 2:
                continue
            found += 1
            p_index[idx] += 1
            res = breaker(p)
            q = pattern_of(res.q)
            q_index[cl.sia_index(q)] += 1
            broken += not cl.is_sia(p @ q) and not cl.is_sia(q @ p)
        dist = ",".join(f"{k}:{v}" for k, v in sorted(p_index.items()))
        print(f"{n:>2} {found:>6} {dist:>18} {q_index[1]:>9} {q_index[2]:>9} {broken:>12}")


if __name__ == "__main__":
    main()
