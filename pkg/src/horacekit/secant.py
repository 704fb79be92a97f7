"""Secant varieties of osculating varieties to Veronese embeddings.

By Terracini's lemma the dimension of the ``s``-th secant variety of the
``k``-th osculating variety ``O_{k,n,d}`` equals ``expdim - h0(I_Y(d)) +
max(0, C(n+d,n) - len Y)`` where ``Y`` is a union of ``s`` generic schemes
whose conditions span the tangent spaces:

* ``k = 0``: 2-fat points (the Veronese itself);
* ``k = 1``: (2,3)-points, i.e. :class:`~horacekit.schemes.Tangent23`;
* ``k >= 2`` and ``n = 2``: the specialized schemes ``ZBar(k)``.  Regularity
  of the specialization implies regularity of the general configuration,
  while a defect of the specialization is only evidence.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from math import ceil, comb
from typing import Callable

from .combinat import dim_forms
from .field_linalg import PrimeModulus, as_modulus, derive_seed
from .hilbert import DEFAULT_TRIALS, HilbertReport, hilbert_report, prefix_reports
from .schemes import FatPoint, SchemeKind, Tangent23, ZBar, place_generic

BASIS_TANGENT = "tangent23"
BASIS_ZBAR = "zbar-specialized"
BASIS_FAT = "fatpoint"

CERTIFIED = "certified-regular"
RANDOMIZED = "randomized"

ZBAR_CAVEAT = "specialized schemes: regular implies regular for the osculating family, a defect is evidence only"


@dataclass(frozen=True)
class SecantProblem:
    k: int
    n: int
    d: int
    s: int

    def __post_init__(self):
        if self.k < 0 or self.n < 2 or self.d < 1 or self.s < 1:
            raise ValueError(f"invalid secant problem {self}")

    @property
    def N(self) -> int:
        return dim_forms(self.n, self.d) - 1


def expected_secant_dim(pr: SecantProblem) -> int:
    """``min(N, s(n + C(k+n,n) - 1) + s - 1)``."""
    return min(pr.N, pr.s * (pr.n + comb(pr.k + pr.n, pr.n) - 1) + pr.s - 1)


@dataclass(frozen=True)
class SecantReport:
    problem: SecantProblem
    N: int
    expdim: int
    dim: int
    defect: int
    defective: bool
    basis: str
    evidence_quality: str
    hilbert: HilbertReport
    listed_exception: bool | None = None
    matches_list: bool | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["hilbert"] = self.hilbert.to_dict()
        out["notes"] = list(self.notes)
        return out

    def flat(self) -> dict:
        """One CSV row: problem fields inlined, nested report reduced to h0/h1."""
        pr = self.problem
        return {
            "k": pr.k,
            "n": pr.n,
            "d": pr.d,
            "s": pr.s,
            "N": self.N,
            "expdim": self.expdim,
            "dim": self.dim,
            "defect": self.defect,
            "defective": self.defective,
            "basis": self.basis,
            "evidence_quality": self.evidence_quality,
            "h0": self.hilbert.h0,
            "h1": self.hilbert.h1,
            "listed_exception": self.listed_exception,
            "matches_list": self.matches_list,
        }


def report_from_hilbert(pr: SecantProblem, hr: HilbertReport, basis: str, notes=()) -> SecantReport:
    expdim = expected_secant_dim(pr)
    dim = expdim - hr.h0 + max(0, dim_forms(pr.n, pr.d) - hr.total_length)
    defect = expdim - dim
    return SecantReport(
        problem=pr,
        N=pr.N,
        expdim=expdim,
        dim=dim,
        defect=defect,
        defective=defect > 0,
        basis=basis,
        evidence_quality=CERTIFIED if hr.regular else RANDOMIZED,
        hilbert=hr,
        notes=tuple(notes),
    )


def secant_kind(k: int, n: int) -> tuple[SchemeKind, str]:
    """Scheme whose generic union computes ``sigma_s(O_{k,n,d})``."""
    if k == 0:
        return FatPoint(2), BASIS_FAT
    if k == 1:
        return Tangent23(), BASIS_TANGENT
    if n == 2:
        return ZBar(k), BASIS_ZBAR
    raise ValueError(f"no explicit scheme model for osculating order k={k} on P^{n} (n >= 3 needs k <= 1)")


def _secant(pr: SecantProblem, kind: SchemeKind, basis: str, trials, p, seed, certify_regular, notes=()) -> SecantReport:
    cfg = place_generic([(kind, pr.s)], pr.n, p=as_modulus(p))
    hr = hilbert_report(cfg, pr.d, trials, p, seed, certify_regular)
    return report_from_hilbert(pr, hr, basis, notes)


def tangential_secant_dim(
    n: int,
    d: int,
    s: int,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
) -> SecantReport:
    if d < 2:
        raise ValueError("the tangential family needs d >= 2")
    pr = SecantProblem(1, n, d, s)
    return _secant(pr, Tangent23(), BASIS_TANGENT, trials, p, seed, certify_regular)


def osculating_secant_dim_p2(
    k: int,
    d: int,
    s: int,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
) -> SecantReport:
    """Plane osculating family via ``s`` generic ``ZBar(k)``; ``k = 0`` falls back to 2-fat points."""
    if d < k + 2:
        raise ValueError(f"osculating order k={k} needs d >= k+2 (got d={d})")
    pr = SecantProblem(k, 2, d, s)
    if k == 0:
        return _secant(pr, FatPoint(2), BASIS_FAT, trials, p, seed, certify_regular)
    return _secant(pr, ZBar(k), BASIS_ZBAR, trials, p, seed, certify_regular, (ZBAR_CAVEAT,))


def secant_dim(
    k: int,
    n: int,
    d: int,
    s: int,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
) -> SecantReport:
    """Dispatch on ``k`` to the appropriate scheme model."""
    if k == 0:
        pr = SecantProblem(0, n, d, s)
        return _secant(pr, FatPoint(2), BASIS_FAT, trials, p, seed, certify_regular)
    if k == 1:
        return tangential_secant_dim(n, d, s, trials, p, seed, certify_regular)
    secant_kind(k, n)
    return osculating_secant_dim_p2(k, d, s, trials, p, seed, certify_regular)


# ---------------------------------------------------------------- exception lists

AH_SPORADIC = frozenset({(2, 4, 5), (3, 4, 9), (4, 3, 7), (4, 4, 14)})


def ah_exception(n: int, d: int, s: int) -> bool:
    """Defective cases for ``s`` generic double points in degree ``d`` on ``P^n``."""
    if d == 2:
        return 2 <= s <= n
    return (n, d, s) in AH_SPORADIC


CONJ1_CUBIC = frozenset({2, 3, 4})


def conj1_exception_printed(n: int, d: int, s: int) -> bool:
    """Exception list for the tangential family as originally stated (quadrics: ``2 <= 2s < n``)."""
    if d == 2:
        return 2 <= 2 * s < n
    return d == 3 and s == n and n in CONJ1_CUBIC


def conj1_exception(n: int, d: int, s: int) -> bool:
    """Exception list with the quadric family read as ``s >= 2`` and ``2s <= n``.

    For ``d = 2`` the tangential secant variety is the variety of quadrics
    of rank at most ``2s``, whose dimension ``s(2n+3-2s) - 1`` falls short of
    the expected value exactly when ``s >= 2`` and ``2s <= n``.
    """
    if d == 2:
        return s >= 2 and 2 * s <= n
    return d == 3 and s == n and n in CONJ1_CUBIC


def quadric_tangential_defect(n: int, s: int) -> int:
    """Closed-form defect of ``sigma_s`` of the tangential variety of the quadric Veronese."""
    N = comb(n + 2, 2) - 1
    expdim = min(N, s * (2 * n + 1) - 1)
    actual = N if 2 * s > n else s * (2 * n + 3 - 2 * s) - 1
    return expdim - actual


CONJ1_RULES: dict[str, Callable[[int, int, int], bool]] = {
    "corrected": conj1_exception,
    "printed": conj1_exception_printed,
}


def _with_list(rep: SecantReport, listed: bool) -> SecantReport:
    return SecantReport(**{**rep.__dict__, "listed_exception": listed, "matches_list": rep.defective == listed})


def check_ah(
    n: int,
    d: int,
    s: int,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
) -> SecantReport:
    """Double points versus the classical list; ``matches_list`` is the verdict."""
    if d < 2:
        raise ValueError("d must be >= 2")
    pr = SecantProblem(0, n, d, s)
    rep = _secant(pr, FatPoint(2), BASIS_FAT, trials, p, seed, certify_regular)
    return _with_list(rep, ah_exception(n, d, s))


def settled_count(n: int, d: int, length: int) -> int:
    return ceil(dim_forms(n, d) / length)


def _scan_cell(kind, basis, k, n, d, s_max, trials, p, seed, certify_regular, notes=()) -> list[SecantReport]:
    mod = as_modulus(p)
    cfg = place_generic([(kind, s_max)], n, p=mod)
    hrs = prefix_reports(cfg, d, None, trials, mod, seed, certify_regular)
    return [report_from_hilbert(SecantProblem(k, n, d, s), hr, basis, notes) for s, hr in enumerate(hrs, 1)]


def ah_scan(
    n_max: int,
    d_max: int,
    s_max: int,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
    n_min: int = 2,
    d_min: int = 2,
) -> list[SecantReport]:
    out = []
    for n in range(n_min, n_max + 1):
        for d in range(d_min, d_max + 1):
            cell = _scan_cell(FatPoint(2), BASIS_FAT, 0, n, d, s_max, trials, p, derive_seed(seed, n, d), certify_regular)
            out.extend(_with_list(r, ah_exception(n, d, r.problem.s)) for r in cell)
    return out


def conj1_scan(
    n_max: int,
    d_max: int,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
    rule: str = "corrected",
    n_min: int = 2,
    d_min: int = 2,
) -> list[SecantReport]:
    """Tangential reports for ``s = 1 .. ceil(C(n+d,n)/(2n+1)) + 1`` on every cell.

    ``rule`` selects the exception list compared against (see
    :data:`CONJ1_RULES`).
    """
    listed = CONJ1_RULES[rule]
    out = []
    for n in range(n_min, n_max + 1):
        for d in range(d_min, d_max + 1):
            s_max = settled_count(n, d, 2 * n + 1) + 1
            cell = _scan_cell(Tangent23(), BASIS_TANGENT, 1, n, d, s_max, trials, p, derive_seed(seed, n, d), certify_regular)
            out.extend(_with_list(r, listed(n, d, r.problem.s)) for r in cell)
    return out


# ---------------------------------------------------------------- plane case


BRANCH_REGULAR = "regular"
BRANCH_I = "lemma34-case-i"
BRANCH_II = "lemma34-case-ii"
BRANCH_INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class Conj2aVerdict:
    problem: SecantProblem
    branch: str
    h0X: int
    h1X: int
    h0T: int
    h0Ybar: int
    h1Ybar: int
    condition_i: bool
    condition_ii: bool
    ybar_regular: bool

    @property
    def sound(self) -> bool:
        """Defective ``Ybar`` needs one of the two conditions; regular ``Ybar`` neither."""
        either = self.condition_i or self.condition_ii
        return either != self.ybar_regular

    def to_dict(self) -> dict:
        out = asdict(self)
        out["sound"] = self.sound
        return out


def ybar_degree(k: int, s: int) -> int:
    return s * (comb(k + 2, 2) + 2)


def classify_plane(k: int, d: int, s: int, X: HilbertReport, T: HilbertReport, Y: HilbertReport) -> Conj2aVerdict:
    """Branch and conditions from the three Hilbert reports of ``s (k+1)P``, ``s (k+2)P``, ``s ZBar(k)``."""
    C = dim_forms(2, d)
    degY = ybar_degree(k, s)
    case_i = Y.h0 == T.h0
    case_ii = Y.h0 == X.h0 - 2 * s
    if not (case_i or case_ii):
        branch = BRANCH_INCONSISTENT
    elif Y.regular:
        branch = BRANCH_REGULAR
    elif case_i:
        branch = BRANCH_I
    else:
        branch = BRANCH_II
    return Conj2aVerdict(
        problem=SecantProblem(k, 2, d, s),
        branch=branch,
        h0X=X.h0,
        h1X=X.h1,
        h0T=T.h0,
        h0Ybar=Y.h0,
        h1Ybar=Y.h1,
        condition_i=X.h1 > max(0, degY - C),
        condition_ii=T.h0 > max(0, C - degY),
        ybar_regular=Y.regular,
    )


def conj2a_classify(
    k: int,
    d: int,
    s: int,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
) -> Conj2aVerdict:
    if k < 1 or d < k + 2 or s < 1:
        raise ValueError(f"need k >= 1, d >= k+2, s >= 1 (got k={k}, d={d}, s={s})")
    mod = as_modulus(p)
    reps = []
    for kind in (FatPoint(k + 1), FatPoint(k + 2), ZBar(k)):
        cfg = place_generic([(kind, s)], 2, p=mod)
        reps.append(hilbert_report(cfg, d, trials, mod, seed, certify_regular))
    return classify_plane(k, d, s, *reps)


def conj2a_grid(
    k_max: int = 4,
    d_max: int = 12,
    s_max: int = 12,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
    k_min: int = 1,
) -> list[Conj2aVerdict]:
    """Every ``k_min <= k <= k_max``, ``k+2 <= d <= d_max``, ``1 <= s <= s_max``."""
    mod = as_modulus(p)
    out = []
    for k in range(k_min, k_max + 1):
        for d in range(k + 2, d_max + 1):
            cell_seed = derive_seed(seed, k, d)
            cols = []
            for kind in (FatPoint(k + 1), FatPoint(k + 2), ZBar(k)):
                cfg = place_generic([(kind, s_max)], 2, p=mod)
                cols.append(prefix_reports(cfg, d, None, trials, mod, cell_seed, certify_regular))
            out.extend(classify_plane(k, d, s, X, T, Y) for s, (X, T, Y) in enumerate(zip(*cols), 1))
    return out


@dataclass(frozen=True)
class SpanReport:
    k: int
    n: int
    d: int
    s: int
    dim: int
    expected: int
    hilbert: HilbertReport

    def to_dict(self) -> dict:
        out = asdict(self)
        out["hilbert"] = self.hilbert.to_dict()
        return out


def osculating_span_dim(
    k: int,
    n: int,
    d: int,
    s: int,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
) -> SpanReport:
    """Dimension of the span of ``k``-osculating spaces at ``s`` generic points."""
    if d < k or k < 0 or s < 1:
        raise ValueError(f"need 0 <= k <= d and s >= 1 (got k={k}, d={d}, s={s})")
    cfg = place_generic([(FatPoint(k + 1), s)], n, p=as_modulus(p))
    hr = hilbert_report(cfg, d, trials, p, seed, certify_regular)
    C = dim_forms(n, d)
    return SpanReport(k, n, d, s, C - 1 - hr.h0, min(s * comb(k + n, n) - 1, C - 1), hr)
