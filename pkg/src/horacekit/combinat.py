"""Exact integer combinatorics: form-space dimensions, the (s, r) split,
remainder shapes, and the inequality verifiers used by the induction.

Python integers are unbounded, so no fixed-width intermediates are needed;
only :func:`dim_forms` enforces a 64-bit range because its result sizes
matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable

_U64 = 1 << 64


def dim_forms(n: int, d: int) -> int:
    """Dimension ``C(n+d, n)`` of the space of degree-``d`` forms on ``P^n``."""
    if n < 1 or d < 0:
        raise ValueError(f"dim_forms needs n >= 1, d >= 0 (got n={n}, d={d})")
    v = comb(n + d, n)
    if v >= _U64:
        raise OverflowError(f"C({n + d},{n}) exceeds the 64-bit range")
    return v


@dataclass(frozen=True)
class SplitSR:
    s: int
    r: int


def split_sr(n: int, d: int) -> SplitSR:
    """Euclidean division ``C(n+d, n) = (2n+1) s + r`` with ``0 <= r < 2n+1``."""
    if n < 1 or d < 0:
        raise ValueError(f"split_sr needs n >= 1, d >= 0 (got n={n}, d={d})")
    s, r = divmod(comb(n + d, n), 2 * n + 1)
    return SplitSR(s, r)


@dataclass(frozen=True)
class RemainderShape:
    """``delta`` 2-fat points, ``h`` 2-jets and ``eps`` simple points."""

    delta: int
    h: int
    eps: int

    def __post_init__(self):
        if self.delta not in (0, 1) or self.eps not in (0, 1) or self.h < 0:
            raise ValueError(f"invalid remainder shape {self}")

    def degree(self, fat_degree: int) -> int:
        return fat_degree * self.delta + 2 * self.h + self.eps


def decompose_remainder(r: int, fat_degree: int, n: int) -> RemainderShape:
    """Write ``r = fat_degree*delta + 2h + eps`` with ``2h + eps <= n``.

    ``delta`` is 1 only when ``r`` exceeds ``n``, so small remainders are
    carried by jets and points alone.
    """
    if r < 0 or r > fat_degree + n:
        raise ValueError(f"no remainder shape for r={r} (fat_degree={fat_degree}, n={n})")
    delta = 1 if r > n else 0
    rest = r - delta * fat_degree
    if rest < 0:
        raise ValueError(f"no remainder shape for r={r} (fat_degree={fat_degree}, n={n})")
    return RemainderShape(delta, rest // 2, rest % 2)


def horace_shape(n: int, d: int) -> RemainderShape:
    """Shape used to fill the trace on ``H = P^{n-1}`` in the inductive step.

    For ``n >= 5`` this decomposes ``r_{n-1,d}`` against 2-fat points of
    ``H`` (degree ``n``).  For ``n = 4`` no fat point is used and
    ``r_{3,d} = 2h + eps`` with up to three jets.
    """
    if n < 4:
        raise ValueError("the inductive construction needs n >= 4")
    r = split_sr(n - 1, d).r
    if n == 4:
        return RemainderShape(0, r // 2, r % 2)
    return decompose_remainder(r, n, n)


def t_quantity(n: int, d: int) -> int:
    """``s_{n,d} - s_{n-1,d} - h - eps - delta``: generic (2,3,n)-points left off ``H``."""
    if n < 3 or d < 2:
        raise ValueError(f"t_quantity needs n >= 3, d >= 2 (got n={n}, d={d})")
    sh = horace_shape(n, d) if n >= 4 else decompose_remainder(split_sr(n - 1, d).r, n, n)
    return split_sr(n, d).s - split_sr(n - 1, d).s - sh.h - sh.eps - sh.delta


@dataclass(frozen=True)
class Step7Facts:
    r3d: int
    r3dm1: int
    d_mod7: int


def r3d_step7_facts(d: int) -> Step7Facts:
    if d < 4:
        raise ValueError("d must be >= 4")
    return Step7Facts(split_sr(3, d).r, split_sr(3, d - 1).r, d % 7)


# ------------------------------------------------------------ published values

# Values printed alongside the hand derivations, keyed by (quantity, args).
# Quantities: s/r -> split_sr(n, d); h/eps/delta -> horace_shape(n, d).
PUBLISHED_VALUES: dict[tuple[str, tuple[int, ...]], tuple[int, str]] = {
    ("s", (5, 5)): (24, "A1: s_{5,5} = [272/11] = 24"),
    ("s", (4, 5)): (14, "A1: s_{4,5} = [126/9] = 14"),
    ("r", (4, 5)): (0, "A1: r_{4,5} = 0"),
    ("s", (5, 3)): (5, "A1: s_{5,3} = [56/11] = 5"),
    ("s", (7, 4)): (22, "A2: s_{7,4} = [C(11,4)/15] = 22"),
    ("r", (7, 4)): (0, "A2: r_{7,4} = 0"),
    ("s", (6, 4)): (16, "A2/A3: C(10,4) = 210 = 16*13 + 2"),
    ("r", (6, 4)): (2, "A2/A3: r_{6,4} = 2"),
    ("h", (7, 4)): (1, "A2: n=7, h = 1"),
    ("s", (8, 4)): (33, "A2: s_{8,4} = [C(12,4)/15] = 33"),
    ("r", (8, 4)): (0, "A2: r_{8,4} = 0"),
    ("h", (8, 4)): (0, "A2: n=8, h = 0"),
    ("s", (9, 4)): (47, "A2: s_{9,4} = [C(13,4)/15] = 47"),
    ("r", (9, 4)): (10, "A2: r_{9,4} = 10"),
    ("h", (9, 4)): (0, "A2: n=9, h = 0"),
    ("s", (10, 4)): (66, "A2: s_{10,4} = [C(14,4)/15] = 66"),
    ("r", (10, 4)): (11, "A2: r_{10,4} = 11"),
    ("h", (10, 4)): (5, "A2: n=10, h = 5"),
    ("s", (11, 4)): (91, "A2: [C(15,4)/15] = 91"),
    ("h", (11, 4)): (5, "A2: n=11, h = 5"),
    ("eps", (11, 4)): (1, "A2: n=11, eps = 1"),
    ("s", (3, 5)): (8, "A3: C(8,3) = 8*7"),
    ("s", (3, 4)): (5, "s_{3,4} = 5"),
    ("r", (3, 4)): (0, "r_{3,4} = 0"),
    ("s", (4, 4)): (7, "s_{4,4} = 7"),
    ("r", (4, 4)): (7, "r_{4,4} = 7"),
    ("s", (5, 4)): (11, "s_{5,4} = 11"),
    ("r", (5, 4)): (5, "r_{5,4} = 5"),
    ("s", (4, 3)): (3, "s_{4,3} = 3"),
}


def exact_value(quantity: str, args: tuple[int, ...]) -> int:
    n, d = args
    if quantity == "s":
        return split_sr(n, d).s
    if quantity == "r":
        return split_sr(n, d).r
    sh = horace_shape(n, d)
    return {"h": sh.h, "eps": sh.eps, "delta": sh.delta}[quantity]


def published_discrepancies(keys: Iterable[tuple[str, tuple[int, ...]]] | None = None) -> list[str]:
    """Mismatches between exact values and the published table."""
    out = []
    for key in PUBLISHED_VALUES if keys is None else keys:
        if key not in PUBLISHED_VALUES:
            continue
        printed, where = PUBLISHED_VALUES[key]
        exact = exact_value(*key)
        if exact != printed:
            q, args = key
            out.append(f"{q}{args}: exact {exact}, published {printed} ({where})")
    return out


# ------------------------------------------------------------ appendix checks


@dataclass(frozen=True)
class InequalityVerdict:
    which: str
    instance: tuple[int, ...]
    holds: bool
    lhs: int
    rhs: int
    relation: str
    hypothesis_met: bool = True
    notes: tuple[str, ...] = field(default_factory=tuple)


def _shape_keys(n: int, d: int) -> list[tuple[str, tuple[int, ...]]]:
    return [("h", (n, d)), ("eps", (n, d)), ("delta", (n, d))]


def _a1(n: int, d: int) -> InequalityVerdict:
    sh = horace_shape(n, d)
    lhs = split_sr(n, d).s - split_sr(n - 1, d).s - sh.h - sh.eps - sh.delta - 1
    rhs = split_sr(n, d - 2).s
    met = (n >= 4 and d >= 6) or (n >= 5 and d == 5)
    keys = [("s", (n, d)), ("s", (n - 1, d)), ("r", (n - 1, d)), ("s", (n, d - 2))] + _shape_keys(n, d)
    return InequalityVerdict("A1", (n, d), lhs >= rhs, lhs, rhs, "lhs >= rhs", met, tuple(published_discrepancies(keys)))


def _a2(n: int) -> InequalityVerdict:
    lhs = t_quantity(n, 4)
    keys = [("s", (n, 4)), ("r", (n, 4)), ("s", (n - 1, 4)), ("r", (n - 1, 4))] + _shape_keys(n, 4)
    return InequalityVerdict("A2", (n,), 2 * lhs > n, lhs, n, "2*lhs > rhs", n >= 7, tuple(published_discrepancies(keys)))


def _a3(n: int, d: int) -> InequalityVerdict:
    lhs = 4 * n - 1
    rhs = 2 * split_sr(n - 1, d).s
    met = (d >= 5 and n >= 4) or (d == 4 and n >= 7)
    notes = tuple(published_discrepancies([("s", (n - 1, d))]))
    return InequalityVerdict("A3", (n, d), lhs <= rhs, lhs, rhs, "lhs <= rhs", met, notes)


def _a4(d: int) -> list[InequalityVerdict]:
    core = split_sr(4, d).s - split_sr(3, d).s - split_sr(3, d - 1).s
    first, bound1 = core - 2, split_sr(4, d - 3).s
    second, bound2 = core + 1, split_sr(4, d - 2).s
    met = d >= 10
    return [
        InequalityVerdict("A4", (d, 1), first >= bound1, first, bound1, "lhs >= rhs", met),
        InequalityVerdict("A4", (d, 2), second <= bound2, second, bound2, "lhs <= rhs", met),
    ]


def _mod7(residue: int) -> InequalityVerdict:
    k = residue % 7
    lhs = (k + 3) * (k + 2) * (k + 1) % 7
    return InequalityVerdict("MOD7", (k,), lhs != 2, lhs, 2, "lhs != rhs")


def default_instances(which: str, nmax: int = 60, dmax: int = 60) -> list[tuple[int, ...]]:
    """The hypothesis range of each family, truncated at ``nmax``/``dmax``."""
    which = which.upper()
    if which == "A1":
        return [(n, d) for n in range(4, nmax + 1) for d in range(5, dmax + 1) if d >= 6 or n >= 5]
    if which == "A2":
        return [(n,) for n in range(7, nmax + 1)]
    if which == "A3":
        return [(n, d) for n in range(4, nmax + 1) for d in range(4, dmax + 1) if d >= 5 or n >= 7]
    if which == "A4":
        return [(d,) for d in range(10, dmax + 1)]
    if which == "MOD7":
        return [(k,) for k in range(7)]
    raise ValueError(f"unknown inequality family {which!r}")


def verify_appendix(which: str, params: Iterable[tuple[int, ...] | int] | None = None) -> list[InequalityVerdict]:
    """Evaluate one inequality family on the given instances.

    Instances outside the family's hypotheses are still evaluated and come
    back with ``hypothesis_met=False``.
    """
    which = which.upper()
    instances = default_instances(which) if params is None else params
    out: list[InequalityVerdict] = []
    for inst in instances:
        inst = (inst,) if isinstance(inst, int) else tuple(inst)
        if which == "A1":
            out.append(_a1(*inst))
        elif which == "A2":
            out.append(_a2(*inst))
        elif which == "A3":
            out.append(_a3(*inst))
        elif which == "A4":
            out.extend(_a4(*inst))
        elif which == "MOD7":
            out.append(_mod7(*inst))
        else:
            raise ValueError(f"unknown inequality family {which!r}")
    return out
