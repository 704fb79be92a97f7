"""Tangential secant scan compared against both quadric exception rules.

Prints every defective cell and every cell where either rule disagrees
with the computed defect.
"""

from __future__ import annotations

import argparse
import json

from horacekit.secant import CONJ1_RULES, conj1_scan


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=6)
    ap.add_argument("--dmax", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="emit one JSON object per cell")
    a = ap.parse_args()

    reps = conj1_scan(a.nmax, a.dmax, seed=a.seed)
    for r in reps:
        cell = (r.problem.n, r.problem.d, r.problem.s)
        listed = {name: rule(*cell) for name, rule in CONJ1_RULES.items()}
        if a.json:
            print(json.dumps({"n": cell[0], "d": cell[1], "s": cell[2], "defect": r.defect, **listed}))
            continue
        if r.defective or any(v != r.defective for v in listed.values()):
            flags = " ".join(f"{k}={'listed' if v else '-'}" for k, v in listed.items())
            print(f"n={cell[0]} d={cell[1]} s={cell[2]:2d} defect={r.defect} {flags}")
    for name, rule in CONJ1_RULES.items():
        bad = [(r.problem.n, r.problem.d, r.problem.s) for r in reps if rule(r.problem.n, r.problem.d, r.problem.s) != r.defective]
        print(f"# rule {name}: {len(bad)} disagreements {bad}")


if __name__ == "__main__":
    main()
