from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from horacekit.secant import (
    BASIS_FAT,
    BASIS_TANGENT,
    BASIS_ZBAR,
    BRANCH_I,
    BRANCH_INCONSISTENT,
    BRANCH_REGULAR,
    CERTIFIED,
    RANDOMIZED,
    SecantProblem,
    ah_exception,
    check_ah,
    conj1_exception,
    conj1_exception_printed,
    conj1_scan,
    conj2a_classify,
    conj2a_grid,
    expected_secant_dim,
    osculating_secant_dim_p2,
    osculating_span_dim,
    quadric_tangential_defect,
    secant_dim,
    tangential_secant_dim,
)


@pytest.mark.parametrize("k,n,d,s,expect", [(1, 2, 3, 2, 9), (2, 2, 5, 3, 20), (1, 4, 4, 7, 62), (1, 4, 4, 8, 69)])
def test_expected_dim(k, n, d, s, expect):
    assert expected_secant_dim(SecantProblem(k, n, d, s)) == expect


def test_problem_validation():
    with pytest.raises(ValueError):
        SecantProblem(1, 1, 3, 1)
    with pytest.raises(ValueError):
        SecantProblem(1, 2, 3, 0)


def _coherent(rep):
    hr = rep.hilbert
    C = comb(rep.problem.n + rep.problem.d, rep.problem.n)
    assert rep.defect == rep.expdim - rep.dim >= 0
    assert rep.defect == hr.h0 - max(0, C - hr.total_length) == hr.h1 - max(0, hr.total_length - C)
    assert rep.defective == (rep.defect > 0)
    assert rep.evidence_quality == (CERTIFIED if hr.regular else RANDOMIZED)


def test_tangential_examples():
    r = tangential_secant_dim(2, 3, 2)
    assert (r.defect, r.dim, r.basis) == (1, 8, BASIS_TANGENT)
    r = tangential_secant_dim(2, 4, 3)
    assert r.dim == r.expdim == 14 and not r.defective
    _coherent(r)


def test_tangential_quartic_fourfold_cubics():
    # 4 schemes of length 9 against 35 cubics: one extra form and two dependent conditions
    r = tangential_secant_dim(4, 3, 4)
    assert r.defective and r.defect == 1
    assert (r.hilbert.h0, r.hilbert.h1) == (1, 2)
    assert r.evidence_quality == RANDOMIZED


def test_osculating_examples():
    a = osculating_secant_dim_p2(1, 3, 2)
    b = tangential_secant_dim(2, 3, 2)
    assert (a.dim, a.defect) == (b.dim, b.defect) and a.basis == BASIS_ZBAR and a.notes
    r = osculating_secant_dim_p2(2, 4, 1)
    assert r.hilbert.h0 == 7 and not r.defective
    assert osculating_secant_dim_p2(0, 2, 2).basis == BASIS_FAT
    with pytest.raises(ValueError):
        osculating_secant_dim_p2(2, 3, 1)
    with pytest.raises(ValueError):
        secant_dim(2, 3, 5, 1)


@settings(max_examples=12)
@given(st.integers(3, 8), st.integers(1, 6))
def test_zbar1_agrees_with_tangent23(d, s):
    a = osculating_secant_dim_p2(1, d, s, seed=s)
    b = tangential_secant_dim(2, d, s, seed=s)
    assert (a.dim, a.defect, a.hilbert.h0, a.hilbert.h1) == (b.dim, b.defect, b.hilbert.h0, b.hilbert.h1)


@pytest.mark.parametrize("n,d,s,defective", [(4, 3, 7, True), (3, 3, 5, False), (3, 4, 9, True), (2, 4, 5, True), (3, 2, 2, True)])
def test_check_ah(n, d, s, defective):
    r = check_ah(n, d, s)
    assert r.defective == defective == r.listed_exception and r.matches_list
    _coherent(r)


def test_exception_predicates():
    assert ah_exception(4, 4, 14) and not ah_exception(4, 4, 15)
    assert [s for s in range(1, 8) if ah_exception(5, 2, s)] == [2, 3, 4, 5]
    assert conj1_exception_printed(5, 2, 2) and conj1_exception_printed(5, 2, 1)
    assert conj1_exception(5, 2, 2) and not conj1_exception(5, 2, 1)
    assert conj1_exception(4, 2, 2) and not conj1_exception_printed(4, 2, 2)
    for n in (2, 3, 4):
        assert conj1_exception(n, 3, n)
    assert not conj1_exception(5, 3, 5)


@pytest.mark.parametrize("n", range(2, 8))
def test_quadric_defect_closed_form(n):
    for s in range(1, n + 2):
        assert (quadric_tangential_defect(n, s) > 0) == conj1_exception(n, 2, s)
    r = tangential_secant_dim(n, 2, 2) if n >= 2 else None
    assert r.defect == quadric_tangential_defect(n, 2)


def test_conj1_scan_small():
    reps = conj1_scan(4, 4, seed=3)
    assert all(r.matches_list for r in reps)
    cells = {(r.problem.n, r.problem.d, r.problem.s) for r in reps if r.defective}
    assert cells == {(2, 3, 2), (3, 3, 3), (4, 3, 4), (4, 2, 2)}
    assert not any(r.defective for r in conj1_scan(2, 5, d_min=5))
    printed = conj1_scan(5, 2, rule="printed", d_min=2)
    assert not all(r.matches_list for r in printed)


def test_conj1_scan_monotone_in_s():
    reps = conj1_scan(4, 5, seed=1)
    by_cell = {}
    for r in reps:
        by_cell.setdefault((r.problem.n, r.problem.d), []).append(r)
    for cell in by_cell.values():
        dims = [r.dim for r in cell]
        assert dims == sorted(dims)


def test_conj2a_examples():
    v = conj2a_classify(1, 3, 2)
    assert v.branch == BRANCH_I and v.h0T == 1 and v.condition_ii and v.sound
    v = conj2a_classify(1, 4, 3)
    assert v.branch == BRANCH_REGULAR and not v.condition_i and not v.condition_ii
    v = conj2a_classify(3, 12, 2)
    assert v.branch == BRANCH_REGULAR and v.sound
    with pytest.raises(ValueError):
        conj2a_classify(0, 4, 1)


def test_conj2a_grid_consistent_and_sound():
    grid = conj2a_grid(2, 8, 8, seed=5)
    assert len(grid) == sum((8 - k - 1) * 8 for k in (1, 2))
    assert not any(v.branch == BRANCH_INCONSISTENT for v in grid)
    assert all(v.sound for v in grid)


@pytest.mark.parametrize("k,n,d,s,expect", [(1, 2, 3, 2, 5), (0, 3, 4, 1, 0), (3, 2, 3, 1, 9), (2, 3, 2, 1, 9)])
def test_span_dim(k, n, d, s, expect):
    r = osculating_span_dim(k, n, d, s)
    assert r.dim == expect
    assert r.expected == min(s * comb(k + n, n) - 1, comb(n + d, n) - 1)


def test_report_serialization_is_stable():
    r = tangential_secant_dim(3, 3, 3, seed=4)
    d = r.to_dict()
    assert set(d) >= {"problem", "N", "expdim", "dim", "defect", "defective", "basis", "evidence_quality"}
    assert d["hilbert"]["defective_evidence"] == r.defective
    assert r.flat()["h0"] == r.hilbert.h0


def test_conj1_full_grid_corrected_rule():
    reps = conj1_scan(6, 6, seed=0)
    assert all(r.matches_list for r in reps)
    quad = {(r.problem.n, r.problem.s): r.defect for r in reps if r.problem.d == 2 and r.defective}
    assert quad == {(n, s): quadric_tangential_defect(n, s) for n in range(2, 7) for s in range(2, n // 2 + 1)}
