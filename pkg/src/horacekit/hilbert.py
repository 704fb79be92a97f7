"""Condition matrices of placed schemes and their Hilbert-function reports.

For a scheme with frame ``(P, v_1..v_n)`` and dual set ``D``, the condition
attached to ``alpha`` in ``D`` sends a degree-``d`` monomial ``x^beta`` to the
coefficient of ``t^alpha`` in ``x^beta(P + sum t_i v_i)``.  These Taylor
coefficients are divided-power derivatives, so no factorials appear.  They
are computed in the truncated ring ``k[t]/(t^gamma : gamma not in D)`` by
building every monomial as a product of linear forms, one degree at a time.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np
from numba import njit

from .combinat import dim_forms
from .field_linalg import (
    PrimeModulus,
    _addmod,
    as_modulus,
    mulmod,
    prefix_ranks,
    trial_seed,
)
from .schemes import (
    FREE,
    Configuration,
    Frame,
    Jet2,
    MultiIndex,
    PlacedScheme,
    PlacementConstraint,
    _unit,
)

DEFAULT_TRIALS = 3


# ---------------------------------------------------------------- monomials


@dataclass(frozen=True)
class MonomialTables:
    """Degree-by-degree construction plan for monomials in ``n+1`` variables.

    Level ``e`` lists the degree-``e`` monomials as sorted variable tuples and
    occupies ``offsets[e-1]:offsets[e]`` of the flat arrays; monomial ``c`` of
    level ``e`` equals monomial ``parent[c]`` of level ``e-1`` times
    ``x_{var[c]}``.  Level ``d`` is the column order.
    """

    n: int
    d: int
    parent: np.ndarray
    var: np.ndarray
    offsets: np.ndarray
    width: int


@lru_cache(maxsize=32)
def monomial_tables(n: int, d: int) -> MonomialTables:
    parents, variables, offsets = [], [], [0]
    prev = {(): 0}
    width = 1
    for e in range(1, d + 1):
        level = list(combinations_with_replacement(range(n + 1), e))
        parents.extend(prev[mono[1:]] for mono in level)
        variables.extend(mono[0] for mono in level)
        offsets.append(offsets[-1] + len(level))
        prev = {m: i for i, m in enumerate(level)}
        width = max(width, len(level))
    return MonomialTables(
        n,
        d,
        np.array(parents, dtype=np.int64),
        np.array(variables, dtype=np.int64),
        np.array(offsets, dtype=np.int64),
        width,
    )


def monomial_basis(n: int, d: int) -> list[MultiIndex]:
    """Exponent vectors of the columns, in column order."""
    out = []
    for mono in combinations_with_replacement(range(n + 1), d):
        a = [0] * (n + 1)
        for j in mono:
            a[j] += 1
        out.append(tuple(a))
    return out


@njit(cache=True)
def _taylor_rows(P, V, down, parent, var, offsets, width, p, mode, out, row0):
    # P: (m, n+1) points, V: (m, n, n+1) directions, down: (n, |D|).
    m = P.shape[0]
    nvars = V.shape[1]
    size = down.shape[1]
    ncols = out.shape[1]
    cur = np.zeros((width, size), dtype=np.uint64)
    nxt = np.zeros((width, size), dtype=np.uint64)
    for s in range(m):
        cur[:, :] = 0
        cur[0, 0] = 1
        for e in range(len(offsets) - 1):
            for g in range(offsets[e], offsets[e + 1]):
                c = g - offsets[e]
                f = cur[parent[g]]
                j = var[g]
                pj = P[s, j]
                for k in range(size):
                    acc = mulmod(pj, f[k], p, mode)
                    for i in range(nvars):
                        b = down[i, k]
                        if b >= 0:
                            acc = _addmod(acc, mulmod(V[s, i, j], f[b], p, mode), p)
                    nxt[c, k] = acc
            cur, nxt = nxt, cur
        for k in range(size):
            r = row0 + s * size + k
            for c in range(ncols):
                out[r, c] = cur[c, k]


def _scheme_rows_into(out: np.ndarray, row0: int, schemes: Sequence[PlacedScheme], d: int, mod: PrimeModulus):
    """Write the rows of consecutive schemes sharing one dual set."""
    D = schemes[0].dual()
    if len(D) == 0:
        return
    tables = monomial_tables(schemes[0].n, d)
    frames = [s.frame.normalized(mod.p) for s in schemes]
    P = np.stack([f[0] for f in frames])
    V = np.stack([f[1] for f in frames])
    _taylor_rows(
        P, V, D.down_table(), tables.parent, tables.var, tables.offsets, tables.width,
        np.uint64(mod.p), mod.mode, out, row0,
    )


def condition_matrix(config: Configuration, d: int, p: int | PrimeModulus | None = None) -> np.ndarray:
    """Stacked condition rows (scheme order, dual-set order within a scheme)."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    mod = as_modulus(config.prime if p is None else p)
    cols = dim_forms(config.n, d)
    out = np.zeros((config.total_length, cols), dtype=np.uint64)
    row = 0
    i = 0
    schemes = config.schemes
    while i < len(schemes):
        j = i
        D = schemes[i].dual()
        while j < len(schemes) and schemes[j].dual() == D:
            j += 1
        _scheme_rows_into(out, row, schemes[i:j], d, mod)
        row += len(D) * (j - i)
        i = j
    return out


def condition_row(scheme: PlacedScheme, alpha: MultiIndex, d: int, p: int | PrimeModulus | None = None) -> np.ndarray:
    """Row of the condition ``alpha`` of one placed scheme, over the degree-``d`` monomials."""
    D = scheme.dual()
    k = D.index(tuple(alpha))
    mat = condition_matrix(Configuration(scheme.n, (scheme,), as_modulus(p).p), d, p)
    return mat[k]


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class HilbertReport:
    n: int
    d: int
    total_length: int
    rank: int
    h0: int
    h1: int
    expected_h0: int
    expected_h1: int
    regular: bool
    trials: int
    prime: int
    seed: int

    @property
    def defective_evidence(self) -> bool:
        return not self.regular

    @property
    def defect(self) -> int:
        return self.h0 - self.expected_h0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["defective_evidence"] = self.defective_evidence
        return out


def make_report(n: int, d: int, total_length: int, rank: int, trials: int, prime: int, seed: int) -> HilbertReport:
    N = dim_forms(n, d)
    return HilbertReport(
        n=n,
        d=d,
        total_length=total_length,
        rank=rank,
        h0=N - rank,
        h1=total_length - rank,
        expected_h0=max(0, N - total_length),
        expected_h1=max(0, total_length - N),
        regular=rank == min(N, total_length),
        trials=trials,
        prime=prime,
        seed=seed,
    )


def prefix_reports(
    config: Configuration,
    d: int,
    checkpoints: Sequence[int] | None = None,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
) -> list[HilbertReport]:
    """Reports for the sub-configurations made of the first ``k`` schemes.

    ``checkpoints`` are scheme counts (default: every prefix ``1..len``).
    A prefix of a resampled configuration is itself a generic placement of
    the shorter configuration, so one elimination per trial serves every
    prefix.  With ``certify_regular`` the trials stop as soon as every
    prefix is regular; otherwise all ``trials`` are run.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    mod = as_modulus(config.prime if p is None else p)
    if checkpoints is None:
        checkpoints = range(1, len(config) + 1)
    checkpoints = list(checkpoints)
    ends = np.cumsum([0] + config.lengths())
    row_cps = [int(ends[k]) for k in checkpoints]
    N = dim_forms(config.n, d)
    best = [0] * len(checkpoints)
    used = 0
    for t in range(trials):
        used = t + 1
        placed = config.resample(trial_seed(seed, t), mod)
        ranks = prefix_ranks(condition_matrix(placed, d, mod), row_cps, mod)
        best = [max(a, b) for a, b in zip(best, ranks)]
        if certify_regular and all(r == min(N, L) for r, L in zip(best, row_cps)):
            break
    return [make_report(config.n, d, L, r, used, mod.p, seed) for r, L in zip(best, row_cps)]


def hilbert_report(
    config: Configuration,
    d: int,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
) -> HilbertReport:
    """Maximum rank of the condition matrix over ``trials`` generic placements."""
    if len(config) == 0:
        if trials < 1:
            raise ValueError("trials must be >= 1")
        mod = as_modulus(config.prime if p is None else p)
        return make_report(config.n, d, 0, 0, 1, mod.p, seed)
    return prefix_reports(config, d, [len(config)], trials, p, seed, certify_regular)[0]


def with_jets(
    config: Configuration,
    s: int,
    on_hyperplane: PlacementConstraint | tuple[int, ...] | bool | None = None,
) -> Configuration:
    """``config`` plus ``s`` 2-jets, optionally supported on a hyperplane with tangent directions."""
    if s < 1:
        raise ValueError("s must be >= 1")
    if on_hyperplane is None or on_hyperplane is False:
        con = FREE
    elif isinstance(on_hyperplane, PlacementConstraint):
        con = on_hyperplane
    else:
        hyper = None if on_hyperplane is True else tuple(on_hyperplane)
        con = PlacementConstraint(hyper, on_h=True, direction_in_h=True)
    n = config.n
    blank = Frame((1,) + (0,) * n, tuple(_unit(n + 1, i + 1) for i in range(n)))
    extra = tuple(PlacedScheme(Jet2(), blank, con) for _ in range(s))
    return Configuration(n, config.schemes + extra, config.prime)


def add_jets_report(
    config: Configuration,
    s: int,
    d: int,
    on_hyperplane: PlacementConstraint | tuple[int, ...] | bool | None = None,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
) -> HilbertReport:
    return hilbert_report(with_jets(config, s, on_hyperplane), d, trials, p, seed, certify_regular)
