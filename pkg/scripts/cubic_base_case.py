"""h0 and h1 of generic (2,3,n)-points on cubics around the settled count."""

from __future__ import annotations

import argparse

from horacekit.combinat import dim_forms, split_sr
from horacekit.hilbert import prefix_reports
from horacekit.schemes import Tangent23, place_generic


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmin", type=int, default=2)
    ap.add_argument("--nmax", type=int, default=9)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()

    print("n  s_n3  r_n3  s   length  N    h0  h1")
    for n in range(a.nmin, a.nmax + 1):
        sr = split_sr(n, 3)
        top = sr.s + 2
        cfg = place_generic([(Tangent23(), top)], n, seed=a.seed)
        for s, rep in enumerate(prefix_reports(cfg, 3, seed=a.seed), 1):
            if s >= sr.s - 1:
                print(f"{n:<2} {sr.s:<5} {sr.r:<5} {s:<3} {rep.total_length:<7} {dim_forms(n, 3):<4} {rep.h0:<3} {rep.h1}")


if __name__ == "__main__":
    main()
