"""Replay the induction over a rectangle of (n, d) and write the trace as JSON."""

from __future__ import annotations

import argparse
import json
import sys
import time

from horacekit.horace import replay_induction


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=6)
    ap.add_argument("--dmax", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--out", default=None, help="JSON output path (default: stdout summary only)")
    a = ap.parse_args()

    t0 = time.perf_counter()
    tr = replay_induction(a.nmax, a.dmax, trials=a.trials, seed=a.seed)
    secs = time.perf_counter() - t0
    for key, node in tr.nodes.items():
        step = node.step
        extra = "" if step is None else f" trace_h0={step.trace_h0} residual_h0={step.residual_h0} conclusion_h0={step.conclusion_h0}"
        print(f"{key:10s} {node.provenance or '-':14s} Prop={node.Prop} Reg={node.Reg}{extra}{' ' + node.error if node.error else ''}")
    for fact in tr.base_facts:
        print(f"{fact.name:18s} holds={fact.holds} {fact.detail}")
    print(f"# {len(tr.nodes)} nodes, {len(tr.implication_violations)} implication violations, {secs:.1f}s", file=sys.stderr)
    if a.out:
        with open(a.out, "w") as fh:
            json.dump(tr.to_dict(), fh, indent=2, default=str)


if __name__ == "__main__":
    main()
