"""Exact rational oracle, independent of the numba kernels.

Conditions are obtained by symbolic expansion of every degree-``d``
monomial along the frame and the rank is taken over ``Q``.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np
import sympy as sp
from sympy.polys.matrices import DomainMatrix


def small_frames(n: int, count: int, seed: int, bound: int = 6) -> list[tuple[list[int], list[list[int]]]]:
    """Integer frames with small entries and full rank over Q."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        M = rng.integers(-bound, bound + 1, size=(n + 1, n + 1))
        if sp.Matrix(M.tolist()).rank() == n + 1:
            out.append((M[0].tolist(), M[1:].tolist()))
    return out


def exact_conditions(n: int, d: int, placed: list[tuple[tuple[list[int], list[list[int]]], list[tuple[int, ...]]]]) -> sp.Matrix:
    """Rows = Taylor coefficients ``[t^alpha] x^beta(P + sum t_i v_i)``."""
    t = sp.symbols(f"t0:{n}")
    rows = []
    for (P, V), alphas in placed:
        x = [P[j] + sum(V[i][j] * t[i] for i in range(n)) for j in range(n + 1)]
        polys = []
        for mono in combinations_with_replacement(range(n + 1), d):
            expr = sp.Integer(1)
            for j in mono:
                expr *= x[j]
            polys.append(sp.Poly(sp.expand(expr), *t) if n else None)
        for a in alphas:
            rows.append([p.coeff_monomial(tuple(a)) for p in polys])
    return sp.Matrix(rows)


def exact_rank(n: int, d: int, placed) -> int:
    M = exact_conditions(n, d, placed)
    return DomainMatrix.from_Matrix(M).convert_to(sp.QQ).rank()
