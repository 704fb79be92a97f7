"""Zero-dimensional schemes described by their dual sets, and their placement.

A scheme supported at a point ``P`` is encoded by a finite order ideal ``D``
of multi-indices in local affine coordinates ``y_1..y_n``: the scheme imposes
the conditions "the coefficient of ``y^alpha`` vanishes" for ``alpha`` in
``D``.  Every scheme used here has a monomial ideal, so ``D`` is simply its
set of standard monomials and ``|D|`` is its length.

Local coordinates come from a :class:`Frame`: a point ``P`` and ``n``
directions ``v_1..v_n``, giving ``y -> P + sum y_i v_i``.  Kinds with a
distinguished line ``L`` expect it along ``line_axis``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .combinat import decompose_remainder
from .field_linalg import PrimeModulus, as_modulus, rank

MultiIndex = tuple[int, ...]

MAX_REDRAWS = 32


# ---------------------------------------------------------------- dual sets


def _graded(indices: Iterable[MultiIndex]) -> tuple[MultiIndex, ...]:
    return tuple(sorted(set(indices), key=lambda a: (sum(a), tuple(-x for x in a))))


@dataclass(frozen=True)
class DualSet:
    """Finite order ideal of multi-indices in ``n`` variables (graded order)."""

    n: int
    indices: tuple[MultiIndex, ...]

    def __post_init__(self):
        idx = _graded(tuple(int(x) for x in a) for a in self.indices)
        for a in idx:
            if len(a) != self.n or min(a, default=0) < 0:
                raise ValueError(f"multi-index {a} invalid for n={self.n}")
        object.__setattr__(self, "indices", idx)
        if idx and not self.is_order_ideal():
            raise ValueError("dual set is not closed under taking divisors")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, a) -> bool:
        return tuple(a) in self._lookup

    @cached_property
    def _lookup(self) -> dict[MultiIndex, int]:
        return {a: i for i, a in enumerate(self.indices)}

    def index(self, a: MultiIndex) -> int:
        return self._lookup[tuple(a)]

    def is_order_ideal(self) -> bool:
        s = set(self.indices)
        for a in s:
            for i, x in enumerate(a):
                if x and a[:i] + (x - 1,) + a[i + 1 :] not in s:
                    return False
        return True

    def as_set(self) -> frozenset[MultiIndex]:
        return frozenset(self.indices)

    def permuted(self, perm: Sequence[int]) -> "DualSet":
        """Relabel variables: new variable ``i`` is old variable ``perm[i]``."""
        return DualSet(self.n, tuple(tuple(a[j] for j in perm) for a in self.indices))

    def down_table(self) -> np.ndarray:
        """``down[i, k]`` = position of ``D[k] - e_i`` in ``D``, or -1."""
        out = -np.ones((self.n, len(self)), dtype=np.int64)
        for k, a in enumerate(self.indices):
            for i in range(self.n):
                if a[i]:
                    out[i, k] = self._lookup[a[:i] + (a[i] - 1,) + a[i + 1 :]]
        return out


def _simplex(n: int, top: int) -> list[MultiIndex]:
    out = []
    for deg in range(top + 1):
        for c in combinations_with_replacement(range(n), deg):
            a = [0] * n
            for j in c:
                a[j] += 1
            out.append(tuple(a))
    return out


def _unit(n: int, i: int, mult: int = 1) -> MultiIndex:
    a = [0] * n
    a[i] = mult
    return tuple(a)


def _plus(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


# ---------------------------------------------------------------- scheme kinds


class SchemeKind:
    """Base class; subclasses define :meth:`dual_set`."""

    line_axis: int | None = None

    def dual_set(self, n: int) -> DualSet:
        raise NotImplementedError

    def length(self, n: int) -> int:
        return len(self.dual_set(n))

    def line_axis_for(self, n: int) -> int | None:
        return self.line_axis


@dataclass(frozen=True)
class FatPoint(SchemeKind):
    """``m``-fat point: all derivatives of order ``< m``."""

    m: int = 2

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("multiplicity must be >= 1")

    def dual_set(self, n: int) -> DualSet:
        return DualSet(n, tuple(_simplex(n, self.m - 1)))

    def length(self, n: int) -> int:
        return comb(n + self.m - 1, n)

    @property
    def label(self) -> str:
        return "pt" if self.m == 1 else f"fat:{self.m}"


@dataclass(frozen=True)
class Jet2(SchemeKind):
    """Point with a tangent direction along the last axis."""

    def dual_set(self, n: int) -> DualSet:
        return DualSet(n, ((0,) * n, _unit(n, n - 1)))

    def length(self, n: int) -> int:
        return 2

    def line_axis_for(self, n: int) -> int:
        return n - 1

    label = "jet"


@dataclass(frozen=True)
class Tangent23(SchemeKind):
    """2-fat point plus second order along a line ``L`` (last axis); length ``2n+1``."""

    def dual_set(self, n: int) -> DualSet:
        last = _unit(n, n - 1)
        idx = [(0,) * n] + [_unit(n, i) for i in range(n)] + [_plus(_unit(n, i), last) for i in range(n)]
        return DualSet(n, tuple(idx))

    def length(self, n: int) -> int:
        return 2 * n + 1

    def line_axis_for(self, n: int) -> int:
        return n - 1

    label = "t23"


def _planar(n: int, what: str):
    if n != 2:
        raise ValueError(f"{what} is only defined on P^2 (got n={n})")


@dataclass(frozen=True)
class ZBar(SchemeKind):
    """Plane scheme between ``(k+1)P`` and ``(k+2)P``, two extra conditions along ``L`` (axis 0)."""

    k: int = 1
    line_axis = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")

    def dual_set(self, n: int) -> DualSet:
        _planar(n, "ZBar")
        k = self.k
        return DualSet(2, tuple(_simplex(2, k)) + ((k + 1, 0), (k, 1)))

    @property
    def label(self) -> str:
        return f"zbar:{self.k}"


@dataclass(frozen=True)
class ZPrime(SchemeKind):
    """``(k+1)P`` plus one extra condition along ``L`` (axis 0)."""

    k: int = 1
    line_axis = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")

    def dual_set(self, n: int) -> DualSet:
        _planar(n, "ZPrime")
        k = self.k
        return DualSet(2, tuple(_simplex(2, k)) + ((k + 1, 0),))

    @property
    def label(self) -> str:
        return f"zprime:{self.k}"


@dataclass(frozen=True)
class Custom(SchemeKind):
    """Arbitrary order ideal; ``line_axis`` optionally marks a distinguished direction."""

    dual: DualSet
    line_axis: int | None = None
    name: str = "custom"

    def dual_set(self, n: int) -> DualSet:
        if n != self.dual.n:
            raise ValueError(f"custom dual set lives in {self.dual.n} variables, not {n}")
        return self.dual

    @property
    def label(self) -> str:
        return self.name


def dual_set(kind: SchemeKind, n: int) -> DualSet:
    return kind.dual_set(n)


def scheme_length(kind: SchemeKind, n: int) -> int:
    return kind.length(n)


def differential_slice(D: DualSet, axis: int, p: int) -> tuple[DualSet, DualSet]:
    """Split ``D`` along ``axis`` at layer ``p``.

    The trace keeps the layer ``alpha_axis == p`` (with that coordinate
    removed); the residual keeps the layers below ``p`` and shifts the layers
    above it down by one.
    """
    if not 0 <= axis < D.n:
        raise ValueError(f"axis {axis} out of range for n={D.n}")
    if p < 0:
        raise ValueError("layer must be >= 0")
    trace, residual = [], []
    for a in D:
        x = a[axis]
        if x == p:
            trace.append(a[:axis] + a[axis + 1 :])
        elif x < p:
            residual.append(a)
        else:
            residual.append(a[:axis] + (x - 1,) + a[axis + 1 :])
    return DualSet(D.n - 1, tuple(trace)), DualSet(D.n, tuple(residual))


# ---------------------------------------------------------------- frames


@dataclass(frozen=True)
class Frame:
    """Point and ``n`` directions, as integer homogeneous coordinates."""

    point: tuple[int, ...]
    directions: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.point) - 1
        if n < 1:
            raise ValueError("frame needs at least two homogeneous coordinates")
        if len(self.directions) != n or any(len(v) != n + 1 for v in self.directions):
            raise ValueError(f"frame on P^{n} needs {n} directions of length {n + 1}")

    @property
    def n(self) -> int:
        return len(self.point) - 1

    def is_independent(self, p: int | PrimeModulus | None = None) -> bool:
        return rank([self.point, *self.directions], p).rank == self.n + 1

    def normalized(self, p: int | PrimeModulus | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Chart-normalized ``(P, V)`` as ``uint64`` arrays.

        The pivot is the coordinate with the largest representative in
        ``[0, p)``; ``P`` is scaled to 1 there and each direction has its
        pivot component removed by subtracting a multiple of ``P``.
        """
        q = as_modulus(p).p
        P = [x % q for x in self.point]
        piv = max(range(len(P)), key=lambda i: P[i])
        if P[piv] == 0:
            raise ValueError("frame point is zero")
        inv = pow(P[piv], q - 2, q)
        P = [x * inv % q for x in P]
        V = []
        for v in self.directions:
            v = [x % q for x in v]
            c = v[piv]
            V.append([(x - c * y) % q for x, y in zip(v, P)])
        return np.array(P, dtype=np.uint64), np.array(V, dtype=np.uint64).reshape(len(V), len(P))


# ---------------------------------------------------------------- placement


@dataclass(frozen=True)
class PlacementConstraint:
    """How one scheme sits relative to a hyperplane ``H = {h . x = 0}``.

    ``on_h`` puts the point on ``H``.  When the point is on ``H`` every
    direction except ``normal_axis`` is drawn inside ``H`` and the
    ``normal_axis`` direction is transversal, so ``H`` is ``{y_normal = 0}``
    in the local chart.  ``direction_in_h`` asks for the distinguished line
    to lie in ``H``; it fixes the default ``normal_axis`` accordingly.
    """

    hyperplane: tuple[int, ...] | None = None
    on_h: bool = False
    direction_in_h: bool = False
    normal_axis: int | None = None

    def __post_init__(self):
        if self.direction_in_h and not self.on_h:
            raise ValueError("a direction-in-H constraint requires support on H")
        if self.normal_axis is not None and not self.on_h:
            raise ValueError("normal_axis only applies to schemes supported on H")

    def hyperplane_for(self, n: int) -> tuple[int, ...]:
        if self.hyperplane is None:
            return (0,) * n + (1,)
        if len(self.hyperplane) != n + 1 or not any(self.hyperplane):
            raise ValueError(f"hyperplane {self.hyperplane} invalid on P^{n}")
        return tuple(self.hyperplane)

    def axis_for(self, kind: SchemeKind, n: int) -> int | None:
        """Local axis transversal to ``H`` (None when the scheme is free)."""
        if not self.on_h:
            return None
        line = kind.line_axis_for(n)
        if self.normal_axis is not None:
            if self.direction_in_h and self.normal_axis == line:
                raise ValueError("the line cannot be both in H and transversal to H")
            return self.normal_axis
        if line is None:
            return 0
        if self.direction_in_h:
            return 0 if line != 0 else 1
        return line


FREE = PlacementConstraint()


def _solve_on(h: Sequence[int], x: np.ndarray, q: int) -> None:
    # Make h . x = 0 by adjusting the last coordinate with nonzero h.
    j = max(i for i, c in enumerate(h) if c % q)
    hj = h[j] % q
    acc = sum((int(c) % q) * int(v) for i, (c, v) in enumerate(zip(h, x)) if i != j) % q
    x[j] = (-acc * pow(hj, q - 2, q)) % q


def draw_frame(
    kind: SchemeKind,
    n: int,
    constraint: PlacementConstraint,
    rng: np.random.Generator,
    p: int | PrimeModulus | None = None,
) -> Frame:
    """Random frame honoring ``constraint``, redrawing degenerate samples."""
    q = as_modulus(p).p
    axis = constraint.axis_for(kind, n)
    h = constraint.hyperplane_for(n) if constraint.on_h else None
    for _ in range(MAX_REDRAWS):
        M = rng.integers(0, q, size=(n + 1, n + 1), dtype=np.uint64)
        rows = [[int(x) for x in r] for r in M]
        if h is not None:
            for r, row in enumerate(rows):
                if r == 0 or r - 1 != axis:
                    _solve_on(h, row, q)
        if not any(rows[0]):
            continue
        fr = Frame(tuple(rows[0]), tuple(tuple(r) for r in rows[1:]))
        if fr.is_independent(q):
            return fr
    raise RuntimeError(f"could not draw a nondegenerate frame for {kind} after {MAX_REDRAWS} attempts")


@dataclass(frozen=True)
class PlacedScheme:
    kind: SchemeKind
    frame: Frame
    constraint: PlacementConstraint = FREE
    fixed: bool = False

    @property
    def n(self) -> int:
        return self.frame.n

    def dual(self) -> DualSet:
        return self.kind.dual_set(self.n)

    @property
    def length(self) -> int:
        return self.kind.length(self.n)

    def normal_axis(self) -> int | None:
        return self.constraint.axis_for(self.kind, self.n)


def _item_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(index)]))


@dataclass(frozen=True)
class Configuration:
    """A union of placed schemes in ``P^n``.

    Frames of non-fixed schemes are a function of ``(seed, position)`` only,
    so a prefix of a configuration placed with some seed equals the shorter
    configuration placed with the same seed.
    """

    n: int
    schemes: tuple[PlacedScheme, ...] = field(default_factory=tuple)
    prime: int = PrimeModulus().p

    def __post_init__(self):
        object.__setattr__(self, "schemes", tuple(self.schemes))
        for s in self.schemes:
            if s.n != self.n:
                raise ValueError(f"scheme on P^{s.n} in a configuration on P^{self.n}")
            s.kind.dual_set(self.n)

    def __len__(self) -> int:
        return len(self.schemes)

    def __iter__(self):
        return iter(self.schemes)

    @property
    def total_length(self) -> int:
        return sum(s.length for s in self.schemes)

    def lengths(self) -> list[int]:
        return [s.length for s in self.schemes]

    def __add__(self, other: "Configuration") -> "Configuration":
        if other.n != self.n:
            raise ValueError("cannot join configurations in different dimensions")
        return Configuration(self.n, self.schemes + other.schemes, self.prime)

    def resample(self, seed: int, p: int | PrimeModulus | None = None) -> "Configuration":
        """Fresh frames for every non-fixed scheme, honoring its constraint."""
        q = as_modulus(self.prime if p is None else p).p
        out = []
        for i, s in enumerate(self.schemes):
            if s.fixed:
                out.append(s)
            else:
                out.append(replace(s, frame=draw_frame(s.kind, self.n, s.constraint, _item_rng(seed, i), q)))
        return Configuration(self.n, tuple(out), q)


def place_generic(
    spec: Sequence[tuple[SchemeKind, int]],
    n: int,
    constraints: PlacementConstraint | Sequence[PlacementConstraint] | None = None,
    seed: int = 0,
    p: int | PrimeModulus | None = None,
) -> Configuration:
    """Generic union of ``count`` copies of each kind, in spec order."""
    if constraints is None or isinstance(constraints, PlacementConstraint):
        constraints = [constraints or FREE] * len(spec)
    if len(constraints) != len(spec):
        raise ValueError("one constraint per spec entry expected")
    q = as_modulus(p).p
    items = []
    for (kind, count), con in zip(spec, constraints):
        if count < 0:
            raise ValueError("counts must be >= 0")
        for _ in range(count):
            items.append(PlacedScheme(kind, Frame((1,) + (0,) * n, tuple(_unit(n + 1, i + 1) for i in range(n))), con))
    return Configuration(n, tuple(items), q).resample(seed, q)


def remainder_shape_spec(n: int, r: int) -> list[tuple[SchemeKind, int]]:
    """``delta`` 2-fat points, ``h`` jets, ``eps`` points of total length ``r``."""
    if not 0 <= r <= 2 * n:
        raise ValueError(f"remainder length must lie in [0, {2 * n}] on P^{n} (got {r})")
    sh = decompose_remainder(r, n + 1, n)
    spec = [(FatPoint(2), sh.delta), (Jet2(), sh.h), (FatPoint(1), sh.eps)]
    return [(k, c) for k, c in spec if c]


def remainder_scheme(n: int, r: int, seed: int = 0, p: int | PrimeModulus | None = None) -> list[PlacedScheme]:
    return list(place_generic(remainder_shape_spec(n, r), n, seed=seed, p=p).schemes)


# ---------------------------------------------------------------- spec grammar

_KINDS = {
    "fat": lambda a: FatPoint(a if a is not None else 2),
    "pt": lambda a: FatPoint(1),
    "jet": lambda a: Jet2(),
    "t23": lambda a: Tangent23(),
    "zbar": lambda a: ZBar(a if a is not None else 1),
    "zprime": lambda a: ZPrime(a if a is not None else 1),
}
_TERM = re.compile(r"^\s*([a-z0-9]+)\s*(?::\s*(\d+))?\s*(?:\*\s*(\d+))?\s*$")


def parse_scheme_spec(text: str, n: int | None = None) -> list[tuple[SchemeKind, int]]:
    """Parse ``kind[:param][*count]`` terms separated by commas.

    When ``n`` is given, each kind is also checked against ``P^n``.

    >>> parse_scheme_spec("t23*5,jet*2,pt")
    [(Tangent23(), 5), (Jet2(), 2), (FatPoint(m=1), 1)]
    """
    out = []
    pos = 0
    for term in text.split(","):
        where = f"at position {pos} ({term.strip()!r})"
        pos += len(term) + 1
        if not term.strip():
            continue
        m = _TERM.match(term)
        if not m or m.group(1) not in _KINDS:
            raise ValueError(f"bad scheme term {where}; expected kind[:param][*count] with kind in {sorted(_KINDS)}")
        param = int(m.group(2)) if m.group(2) else None
        count = int(m.group(3)) if m.group(3) else 1
        try:
            kind = _KINDS[m.group(1)](param)
            if n is not None:
                kind.dual_set(n)
        except ValueError as exc:
            raise ValueError(f"invalid scheme term {where}: {exc}") from None
        out.append((kind, count))
    if not out:
        raise ValueError("empty scheme spec")
    return out


def format_scheme_spec(spec: Sequence[tuple[SchemeKind, int]]) -> str:
    return ",".join(f"{k.label}*{c}" for k, c in spec)
