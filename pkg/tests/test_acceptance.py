"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

from __future__ import annotations

import json
import time
from math import comb

import numpy as np
import pytest

from horacekit.combinat import default_instances, dim_forms, split_sr, verify_appendix
from horacekit.hilbert import add_jets_report, hilbert_report, prefix_reports
from horacekit.horace import replay_induction
from horacekit.schemes import (
    FatPoint,
    Jet2,
    Tangent23,
    ZBar,
    ZPrime,
    differential_slice,
    dual_set,
    place_generic,
)
from horacekit.secant import ah_exception, ah_scan, conj1_exception_printed, conj1_scan, conj2a_grid

SEED = 0


@pytest.fixture
def verdict(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail

    return emit


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


# 1 ---------------------------------------------------------------------------


def run_ah():
    return ah_scan(4, 4, 15, seed=SEED, d_min=1)


def test_criterion_1_double_points(verdict):
    reps, secs = _timed(run_ah)
    wrong = [
        (r.problem.n, r.problem.d, r.problem.s)
        for r in reps
        if r.defective != ah_exception(r.problem.n, r.problem.d, r.problem.s)
    ]
    flagged = sorted((r.problem.n, r.problem.d, r.problem.s) for r in reps if r.defective)
    ok = not wrong and secs <= 10
    verdict(1, ok, f"{len(reps)} cells, defective {flagged}, mismatches {wrong}, {secs:.2f}s")


# 2 ---------------------------------------------------------------------------


def run_cubics():
    rows = {}
    for n in range(4, 10):
        s = split_sr(n, 3).s
        top = s + 3 if n == 4 else s + 1
        cfg = place_generic([(Tangent23(), top)], n, seed=SEED)
        reps = prefix_reports(cfg, 3, range(1, top + 1), seed=SEED)
        rows[n] = {"s": s, "h0": [r.h0 for r in reps], "h1": [r.h1 for r in reps]}
    return rows


def test_criterion_2_cubic_base_case(verdict):
    rows, secs = _timed(run_cubics)
    bad = []
    for n in range(5, 10):
        s = rows[n]["s"]
        if rows[n]["h1"][s - 1] != 0 or rows[n]["h0"][s] != 0:
            bad.append(f"n={n}: h1(s)={rows[n]['h1'][s - 1]}, h0(s+1)={rows[n]['h0'][s]}")
    four = rows[4]
    h0_4, h1_4 = four["h0"][3], four["h1"][3]
    if (h0_4, h1_4) != (1, 1):
        bad.append(f"n=4, s=4: h0={h0_4}, h1={h1_4} (expected h0=h1=1)")
    if any(h != 0 for h in four["h0"][4:]):
        bad.append(f"n=4, s>=5: h0={four['h0'][4:]}")
    ok = not bad and secs <= 30
    verdict(2, ok, f"s_(n,3) for n=4..9: {[rows[n]['s'] for n in range(4, 10)]}; problems {bad}; {secs:.2f}s")


# 3 ---------------------------------------------------------------------------


def run_conj1(rule="printed"):
    return conj1_scan(6, 6, seed=SEED, rule=rule)


def test_criterion_3_tangential_exceptions(verdict):
    reps, secs = _timed(run_conj1)
    cells = {(r.problem.n, r.problem.d, r.problem.s): r for r in reps}
    wrong = sorted(c for c, r in cells.items() if r.defective != conj1_exception_printed(*c))
    low = sorted(c for c, r in cells.items() if conj1_exception_printed(*c) and r.defect < 1)
    ok = not wrong and not low and secs <= 120
    verdict(3, ok, f"{len(reps)} cells, disagreements with the listed exceptions {wrong}, {secs:.2f}s")


# 4 ---------------------------------------------------------------------------


def run_small_facts():
    return {
        "t23x2_P4_d2": hilbert_report(place_generic([(Tangent23(), 2)], 4, seed=SEED), 2, seed=SEED).h0,
        "t23x3_P6_d2": hilbert_report(place_generic([(Tangent23(), 3)], 6, seed=SEED), 2, seed=SEED).h0,
        "t23x5_P3_d4": hilbert_report(place_generic([(Tangent23(), 5)], 3, seed=SEED), 4, seed=SEED).h0,
    }


def test_criterion_4_degree_four_facts(verdict):
    got, secs = _timed(run_small_facts)
    ok = got == {"t23x2_P4_d2": 1, "t23x3_P6_d2": 1, "t23x5_P3_d4": 0}
    verdict(4, ok, f"{got}, {secs:.2f}s")


# 5 ---------------------------------------------------------------------------


def run_replay():
    return replay_induction(6, 6, seed=SEED)


def test_criterion_5_induction_replay(verdict):
    tr, secs = _timed(run_replay)
    props = {k: v.Prop for k, v in tr.nodes.items()}
    expected = {f"n={n},d={d}" for n in range(4, 7) for d in range(4, 7)}
    checked = [v.step for v in tr.nodes.values() if v.step is not None]
    ok = (
        set(props) == expected
        and all(p is True for p in props.values())
        and not tr.implication_violations
        and all(s.implication_observed for s in checked)
        and secs <= 300
    )
    verdict(5, ok, f"Prop {props}; implication violations {tr.implication_violations}; {secs:.2f}s")


# 6 ---------------------------------------------------------------------------


def run_appendix():
    out = {}
    for which in ("A1", "A2", "A3", "MOD7"):
        out[which] = verify_appendix(which)
    out["A4"] = verify_appendix("A4", default_instances("A4", dmax=200))
    return out


def test_criterion_6_appendix(verdict):
    res, secs = _timed(run_appendix)
    failing = {w: [v.instance for v in vs if v.hypothesis_met and not v.holds] for w, vs in res.items()}
    notes = {note for vs in res.values() for v in vs for note in v.notes}
    coverage = (
        {v.instance for v in res["A1"]} >= {(5, 5), (4, 6), (60, 60)}
        and {v.instance for v in res["A2"]} == {(n,) for n in range(7, 61)}
        and {v.instance[0] for v in res["A4"]} == set(range(10, 201))
        and len(res["MOD7"]) == 7
    )
    slip_272 = any("272/11" in s for s in notes)
    slip_15 = {n for n in range(8, 12) if any(f"s({n}, 4)" in s and "/15]" in s for s in notes)}
    ok = coverage and not any(failing.values()) and slip_272 and slip_15 == {8, 9, 10, 11} and secs <= 1
    counts = {w: len(vs) for w, vs in res.items()}
    verdict(6, ok, f"verdicts {counts}, failing {failing}, flagged slips {len(notes)}, {secs:.3f}s")


# 7 ---------------------------------------------------------------------------


def _kinds(n):
    out = [FatPoint(m) for m in range(1, 5)] + [Jet2(), Tangent23()]
    if n == 2:
        out += [ZBar(k) for k in range(1, 5)] + [ZPrime(k) for k in range(1, 5)]
    return out


def _slicing_ok():
    for n in range(2, 10):
        L = n - 1
        for kind in _kinds(n):
            D = dual_set(kind, n)
            if not D.is_order_ideal():
                return f"{kind} not an order ideal"
            for axis in range(n):
                layers = set()
                for p in range(max(a[axis] for a in D) + 2):
                    tr, res = differential_slice(D, axis, p)
                    if len(tr) + len(res) != len(D) or not (tr.is_order_ideal() and res.is_order_ideal()):
                        return f"conservation {kind} n={n} axis={axis} p={p}"
                    layers |= {a[:axis] + (p,) + a[axis:] for a in tr}
                if layers != D.as_set():
                    return f"stacking {kind} n={n} axis={axis}"
        T = dual_set(Tangent23(), n)
        t23_h = dual_set(Tangent23(), n - 1).as_set()
        fat_h = dual_set(FatPoint(2), n - 1).as_set()
        for axis in range(n - 1):
            tr, res = differential_slice(T, axis, 0)
            if tr.as_set() != t23_h or res.as_set() != {(0,) * n, tuple(int(i == L) for i in range(n))}:
                return f"(2,3,n) layer 0 with line in H, n={n}"
            tr, _ = differential_slice(T, axis, 1)
            if tr.as_set() != dual_set(Jet2(), n - 1).as_set():
                return f"(2,3,n) layer 1 with line in H, n={n}"
        for p in (0, 1):
            tr, res = differential_slice(T, L, p)
            if tr.as_set() != fat_h or res.as_set() != dual_set(FatPoint(2), n).as_set():
                return f"(2,3,n) transversal layer {p}, n={n}"
        if len(differential_slice(T, L, 2)[0]) != 1:
            return f"(2,3,n) transversal layer 2, n={n}"
    return None


def _random_spec(rng, n, max_items):
    pool = [FatPoint(1), FatPoint(2), FatPoint(3), Jet2(), Tangent23()]
    return [(pool[int(i)], 1) for i in rng.integers(0, len(pool), size=int(rng.integers(0, max_items + 1)))]


def run_properties():
    rng = np.random.default_rng(SEED)
    drops = []
    for case in range(100):
        n = int(rng.choice([2, 3, 4]))
        d = int(rng.integers(1, 5))
        z = place_generic(_random_spec(rng, n, 4), n, seed=case)
        before = hilbert_report(z, d, seed=case).h0
        after = add_jets_report(z, 1, d, seed=case).h0
        drops.append(before - after == min(2, before))
    settled = []
    for case in range(50):
        n = int(rng.choice([2, 3, 4]))
        d = int(rng.integers(2, 5))
        N = dim_forms(n, d)
        spec, total = [], 0
        for kind in (Tangent23(), FatPoint(2), Jet2()):
            k = int(rng.integers(0, (N - total) // kind.length(n) + 1))
            spec.append((kind, k))
            total += k * kind.length(n)
        spec.append((FatPoint(1), N - total))
        rep = hilbert_report(place_generic([x for x in spec if x[1]], n, seed=case), d, seed=case)
        settled.append(rep.total_length == N and rep.h0 == rep.h1)
    return {"jet_drop": drops, "settled": settled, "slicing": _slicing_ok()}


def test_criterion_7_property_suites(verdict):
    res, secs = _timed(run_properties)
    ok = all(res["jet_drop"]) and len(res["jet_drop"]) == 100 and all(res["settled"]) and len(res["settled"]) == 50
    ok = ok and res["slicing"] is None
    verdict(
        7,
        ok,
        f"jet drop {sum(res['jet_drop'])}/100, settled {sum(res['settled'])}/50, slicing {res['slicing'] or 'ok'}, {secs:.2f}s",
    )


# 8 ---------------------------------------------------------------------------


def run_conj2a():
    return conj2a_grid(4, 12, 12, seed=SEED)


def test_criterion_8_plane_grid(verdict):
    grid, secs = _timed(run_conj2a)
    expected = sum((12 - k - 1) * 12 for k in range(1, 5))
    inconsistent = [v.problem for v in grid if v.branch == "inconsistent"]
    unsound = [v.problem for v in grid if not v.sound]
    ok = len(grid) == expected and not inconsistent and not unsound and secs <= 300
    verdict(8, ok, f"{len(grid)} verdicts, inconsistent {len(inconsistent)}, unsound {len(unsound)}, {secs:.2f}s")


# 9 ---------------------------------------------------------------------------


def _serialize_all():
    return {
        "1": _dump([r.to_dict() for r in run_ah()]),
        "2": _dump(run_cubics()),
        "3": _dump([r.to_dict() for r in run_conj1()]),
        "4": _dump(run_small_facts()),
        "5": _dump(run_replay().to_dict()),
        "6": _dump({w: [v.__dict__ for v in vs] for w, vs in run_appendix().items()}),
        "7": _dump(run_properties()),
        "8": _dump([v.to_dict() for v in run_conj2a()]),
    }


def test_criterion_9_determinism(verdict):
    first, secs = _timed(_serialize_all)
    second = _serialize_all()
    differing = [k for k in first if first[k] != second[k]]
    verdict(9, not differing, f"runs compared {sorted(first)}, differing {differing}, {secs:.2f}s per pass")
