"""Plane osculating classification grid, summarized by branch."""

from __future__ import annotations

import argparse
from collections import Counter

from horacekit.secant import conj2a_grid


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=4)
    ap.add_argument("--dmax", type=int, default=12)
    ap.add_argument("--smax", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()

    grid = conj2a_grid(a.kmax, a.dmax, a.smax, seed=a.seed)
    print(Counter(v.branch for v in grid))
    for v in grid:
        if not v.ybar_regular:
            pr = v.problem
            print(f"k={pr.k} d={pr.d:2d} s={pr.s:2d} {v.branch:16s} h0(Ybar)={v.h0Ybar} h1(Ybar)={v.h1Ybar} cond_i={v.condition_i} cond_ii={v.condition_ii}")
    print(f"unsound: {sum(not v.sound for v in grid)}")


if __name__ == "__main__":
    main()
