"""Differential Horace steps: construction, verification and induction replay.

A step is a hyperplane ``H``, a configuration ``W`` and schemes ``Z_i``
supported on ``H`` with slicing layers ``p_i``.  Every scheme on ``H`` is
placed in a frame whose directions lie in ``H`` except one transversal
direction (its ``normal_axis``), so ``H`` is a coordinate hyperplane of the
local chart and traces/residuals are obtained by slicing dual sets.

If the trace (on ``H``, degree ``d``) and the residual (on ``P^n``, degree
``d-1``) both have no sections, then ``W`` together with a generic copy of
the ``Z_i`` has no sections in degree ``d``.  :func:`verify_step` checks the
two hypotheses and the conclusion independently.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from math import comb
from typing import Sequence


from .combinat import horace_shape, split_sr, t_quantity
from .field_linalg import PrimeModulus, as_modulus, derive_seed, prefix_ranks, trial_seed
from .hilbert import DEFAULT_TRIALS, HilbertReport, condition_matrix, make_report, prefix_reports
from .schemes import (
    FREE,
    Configuration,
    Custom,
    DualSet,
    FatPoint,
    Frame,
    Jet2,
    PlacedScheme,
    PlacementConstraint,
    SchemeKind,
    Tangent23,
    _unit,
    differential_slice,
    place_generic,
    remainder_shape_spec,
)

THM22_GENERAL = "thm22-general"
THM22_N4 = "thm22-n4"
LEMMA23_44 = "lemma23-44"
LEMMA23_54 = "lemma23-54"
LEMMA23_64 = "lemma23-64"
STEP7_INNER = "step7-inner"
CUSTOM = "custom"


class ConstructionError(ValueError):
    """Counts do not allow the requested configuration."""


def _blank(kind: SchemeKind, n: int, con: PlacementConstraint = FREE) -> PlacedScheme:
    frame = Frame((1,) + (0,) * n, tuple(_unit(n + 1, i + 1) for i in range(n)))
    return PlacedScheme(kind, frame, con)


def _items(kind: SchemeKind, count: int, n: int, con: PlacementConstraint = FREE) -> list[PlacedScheme]:
    return [_blank(kind, n, con) for _ in range(count)]


def line_in_h(n: int, hyperplane=None) -> PlacementConstraint:
    """On ``H`` with the distinguished line inside ``H``; sliced along axis 0."""
    return PlacementConstraint(hyperplane, on_h=True, direction_in_h=True, normal_axis=0)


def line_transversal(n: int, hyperplane=None) -> PlacementConstraint:
    """On ``H`` with the distinguished line (last axis) transversal to ``H``."""
    return PlacementConstraint(hyperplane, on_h=True, normal_axis=n - 1)


def on_h(hyperplane=None) -> PlacementConstraint:
    return PlacementConstraint(hyperplane, on_h=True, normal_axis=0)


def fat_point_of_h(n: int) -> Custom:
    """2-fat point of ``H`` (no derivative along axis 0)."""
    idx = [(0,) * n] + [_unit(n, i) for i in range(1, n)]
    return Custom(DualSet(n, tuple(idx)), name="fat2-in-H")


def tangent23_of_h(n: int) -> Custom:
    """(2,3,n-1)-point inside ``H`` (axis 0 normal, line along the last axis)."""
    inner = Tangent23().dual_set(n - 1)
    return Custom(DualSet(n, tuple((0,) + a for a in inner)), line_axis=n - 1, name="t23-in-H")


@dataclass(frozen=True)
class HoraceStep:
    n: int
    d: int
    W: Configuration
    Z: tuple[PlacedScheme, ...]
    p: tuple[int, ...]
    provenance: str = CUSTOM
    hyperplane: tuple[int, ...] | None = None
    degree: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "Z", tuple(self.Z))
        object.__setattr__(self, "p", tuple(int(x) for x in self.p))
        if len(self.p) != len(self.Z):
            raise ValueError("one layer index per scheme of Z is required")
        if self.W.n != self.n:
            raise ValueError("W lives in the wrong dimension")
        for z, layer in zip(self.Z, self.p):
            if z.n != self.n or not z.constraint.on_h:
                raise ValueError("every scheme of Z must be supported on H")
            top = max((a[z.normal_axis()] for a in z.dual()), default=0)
            if not 0 <= layer <= top:
                raise ValueError(f"layer {layer} outside the range 0..{top} of {z.kind}")

    @property
    def H(self) -> tuple[int, ...]:
        return self.hyperplane if self.hyperplane is not None else (0,) * self.n + (1,)

    @property
    def target_degree(self) -> int:
        return self.d if self.degree is None else self.degree

    def placed(self, seed: int) -> "HoraceStep":
        """Same step with every frame redrawn from ``seed``."""
        full = Configuration(self.n, self.W.schemes + self.Z, self.W.prime).resample(seed)
        k = len(self.W)
        return replace(self, W=Configuration(self.n, full.schemes[:k], full.prime), Z=full.schemes[k:])

    def pieces(self) -> list[tuple[PlacedScheme, int]]:
        """Every scheme with its layer; ``W`` schemes on ``H`` use layer 0."""
        out = [(w, 0) for w in self.W if w.constraint.on_h]
        return out + list(zip(self.Z, self.p))

    def counts(self) -> dict:
        trace = residual = 0
        for s, layer in self.pieces():
            tr, res = differential_slice(s.dual(), s.normal_axis(), layer)
            trace += len(tr)
            residual += len(res)
        residual += sum(w.length for w in self.W if not w.constraint.on_h)
        return {"trace_length": trace, "residual_length": residual, "total_length": trace + residual}


# ---------------------------------------------------------------- slicing


def _drop_coord(h: Sequence[int]) -> int:
    return max(i for i, c in enumerate(h) if c)


def trace_configuration(step: HoraceStep) -> Configuration:
    """Traces on ``H = P^{n-1}`` with frames fixed by the current placement."""
    n = step.n
    j = _drop_coord(step.H)
    items = []
    for s, layer in step.pieces():
        axis = s.normal_axis()
        tr, _ = differential_slice(s.dual(), axis, layer)
        if len(tr) == 0:
            continue
        drop = lambda v: tuple(v[:j]) + tuple(v[j + 1 :])
        dirs = tuple(drop(v) for i, v in enumerate(s.frame.directions) if i != axis)
        frame = Frame(drop(s.frame.point), dirs)
        items.append(PlacedScheme(Custom(tr, name="trace"), frame, FREE, fixed=True))
    return Configuration(n - 1, tuple(items), step.W.prime)


def residual_configuration(step: HoraceStep) -> Configuration:
    items = [replace(w, fixed=True) for w in step.W if not w.constraint.on_h]
    for s, layer in step.pieces():
        _, res = differential_slice(s.dual(), s.normal_axis(), layer)
        if len(res):
            items.append(PlacedScheme(Custom(res, name="residual"), s.frame, s.constraint, fixed=True))
    return Configuration(step.n, tuple(items), step.W.prime)


def conclusion_configuration(step: HoraceStep) -> Configuration:
    """``W`` as placed together with unconstrained copies of the ``Z`` kinds."""
    items = [replace(w, fixed=True) for w in step.W]
    items += [_blank(z.kind, step.n) for z in step.Z]
    return Configuration(step.n, tuple(items), step.W.prime)


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class StepReport:
    provenance: str
    n: int
    d: int
    trace_h0: int
    residual_h0: int
    conclusion_h0: int
    step_valid: bool
    implication_observed: bool
    trace: HilbertReport
    residual: HilbertReport
    conclusion: HilbertReport

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("trace", "residual", "conclusion"):
            out[key] = getattr(self, key).to_dict()
        return out


def _rank_of(cfg: Configuration, d: int, mod: PrimeModulus) -> int:
    if cfg.total_length == 0:
        return 0
    return prefix_ranks(condition_matrix(cfg, d, mod), [cfg.total_length], mod)[0]


def verify_step(
    step: HoraceStep,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
) -> StepReport:
    """Trace, residual and conclusion ranks, maximized over ``trials`` placements."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    mod = as_modulus(step.W.prime if p is None else p)
    d = step.target_degree
    n = step.n
    best = [0, 0, 0]
    lengths = [0, 0, 0]
    spaces = [comb(n - 1 + d, n - 1), comb(n + d - 1, n), comb(n + d, n)]
    used = 0
    for t in range(trials):
        used = t + 1
        ts = trial_seed(seed, t)
        placed = replace(step, W=replace(step.W, prime=mod.p)).placed(ts)
        cfgs = [
            trace_configuration(placed),
            residual_configuration(placed),
            conclusion_configuration(placed).resample(derive_seed(ts, 1)),
        ]
        degs = [d, d - 1, d]
        for i, (cfg, e) in enumerate(zip(cfgs, degs)):
            lengths[i] = cfg.total_length
            best[i] = max(best[i], _rank_of(cfg, e, mod))
        if certify_regular and all(b == min(sp, L) for b, sp, L in zip(best, spaces, lengths)):
            break
    trace = make_report(n - 1, d, lengths[0], best[0], used, mod.p, seed)
    residual = make_report(n, d - 1, lengths[1], best[1], used, mod.p, seed)
    conclusion = make_report(n, d, lengths[2], best[2], used, mod.p, seed)
    valid = trace.h0 == 0 and residual.h0 == 0
    return StepReport(
        provenance=step.provenance,
        n=n,
        d=d,
        trace_h0=trace.h0,
        residual_h0=residual.h0,
        conclusion_h0=conclusion.h0,
        step_valid=valid,
        implication_observed=(not valid) or conclusion.h0 == 0,
        trace=trace,
        residual=residual,
        conclusion=conclusion,
    )


# ---------------------------------------------------------------- constructions


def _finish(n, d, W, Z, p, provenance, seed, prime, degree=None) -> HoraceStep:
    mod = as_modulus(prime)
    step = HoraceStep(n, d, Configuration(n, tuple(W), mod.p), tuple(Z), tuple(p), provenance, None, degree)
    return step.placed(seed)


def _remainder_items(n: int, r: int) -> list[PlacedScheme]:
    out = []
    for kind, count in remainder_shape_spec(n, r):
        out += _items(kind, count, n)
    return out


def build_step_general(n: int, d: int, seed: int = 0, prime: int | PrimeModulus | None = None) -> HoraceStep:
    """Inductive step filling ``H`` with (2,3,n)-points, jets, a point and a fat point."""
    if n < 4 or d < 4:
        raise ConstructionError("the inductive step needs n >= 4 and d >= 4")
    sh = horace_shape(n, d)
    s_prev = split_sr(n - 1, d).s
    t = t_quantity(n, d)
    if t < 0:
        raise ConstructionError(
            f"A.1 violated at (n={n}, d={d}): s_{{n-1,d}}+h+eps+delta exceeds s_{{n,d}} by {-t}"
        )
    T23 = Tangent23()
    Z = (
        _items(T23, s_prev, n, line_in_h(n))
        + _items(T23, sh.h, n, line_in_h(n))
        + _items(T23, sh.eps, n, line_transversal(n))
        + _items(T23, sh.delta, n, line_transversal(n))
    )
    p = [0] * s_prev + [1] * sh.h + [2] * sh.eps + [0] * sh.delta
    W = _items(T23, t, n) + _remainder_items(n, split_sr(n, d).r)
    return _finish(n, d, W, Z, p, THM22_N4 if n == 4 else THM22_GENERAL, seed, prime)


def build_lemma23(n: int, seed: int = 0, prime: int | PrimeModulus | None = None) -> HoraceStep:
    """Degree-4 starting cases on ``P^4``, ``P^5`` and ``P^6``."""
    T23 = Tangent23()
    if n == 4:
        step = build_step_general(4, 4, seed, prime)
        return replace(step, provenance=LEMMA23_44)
    if n == 5:
        Z = _items(T23, 8, 5, line_in_h(5)) + [_blank(fat_point_of_h(5), 5, on_h())]
        p = [0] * 7 + [1, 0]
        return _finish(5, 4, _items(T23, 3, 5), Z, p, LEMMA23_54, seed, prime)
    if n == 6:
        Z = (
            _items(T23, 12, 6, line_in_h(6))
            + _items(T23, 1, 6, line_transversal(6))
            + [_blank(Jet2(), 6, PlacementConstraint(on_h=True, direction_in_h=True, normal_axis=0))]
        )
        p = [0] * 11 + [1, 2, 0]
        return _finish(6, 4, _items(T23, 3, 6), Z, p, LEMMA23_64, seed, prime)
    raise ConstructionError(f"no degree-4 starting construction on P^{n}")


def build_step_thm22(n: int, d: int, seed: int = 0, prime: int | PrimeModulus | None = None) -> HoraceStep:
    """The step used at ``(n, d)``: the degree-4 starting cases for ``n <= 6``, else the inductive one."""
    if d == 4 and n in (4, 5, 6):
        return build_lemma23(n, seed, prime)
    return build_step_general(n, d, seed, prime)


def build_step7_inner(d: int, seed: int = 0, prime: int | PrimeModulus | None = None) -> HoraceStep:
    """Step on ``P^4`` in degree ``d-1`` for the case ``r_{3,d} = 6``."""
    r3d = split_sr(3, d).r
    if d < 10 or r3d != 6:
        raise ConstructionError(f"the inner step needs d >= 10 and r_{{3,d}} = 6 (d={d}, r_{{3,d}}={r3d})")
    n = 4
    s3d, s3m = split_sr(3, d).s, split_sr(3, d - 1).s
    s4d, r4d = split_sr(4, d).s, split_sr(4, d).r
    free = s4d - s3d - s3m - 2
    if free < 0 or s3m < 3:
        raise ConstructionError(f"A.4 violated at d={d}: negative count of generic (2,3,4)-points")
    T23 = Tangent23()
    Z = (
        _items(T23, s3m - 3, n, line_in_h(n))
        + _items(T23, 1, n, line_in_h(n))
        + _items(T23, 1, n, line_transversal(n))
    )
    p = [0] * (s3m - 3) + [1, 2]
    W = (
        _items(FatPoint(1), 2 * s3d, n)
        + _items(T23, free, n)
        + _items(tangent23_of_h(n), 3, n, on_h())
        + _remainder_items(n, r4d)
    )
    return _finish(n, d, W, Z, p, STEP7_INNER, seed, prime, degree=d - 1)


# ---------------------------------------------------------------- induction replay

NOT_EVALUATED = "not-evaluated"


@dataclass(frozen=True)
class BaseFact:
    name: str
    holds: bool
    detail: dict
    source: str


@dataclass
class NodeVerdict:
    n: int
    d: int
    Prop: bool | str = NOT_EVALUATED
    Reg: bool | str = NOT_EVALUATED
    Dime: bool | str = NOT_EVALUATED
    Degue: bool | str = NOT_EVALUATED
    provenance: str | None = None
    step: StepReport | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "Prop": self.Prop,
            "Reg": self.Reg,
            "Dime": self.Dime,
            "Degue": self.Degue,
            "provenance": self.provenance,
            "step": None if self.step is None else self.step.to_dict(),
            "error": self.error,
        }


def node_key(n: int, d: int) -> str:
    return f"n={n},d={d}"


@dataclass
class InductionTrace:
    nodes: dict[str, NodeVerdict] = field(default_factory=dict)
    edges: list[tuple[str, str]] = field(default_factory=list)
    base_facts: list[BaseFact] = field(default_factory=list)

    @property
    def implication_violations(self) -> list[str]:
        return [k for k, v in self.nodes.items() if v.step is not None and not v.step.implication_observed]

    def to_dict(self) -> dict:
        return {
            "nodes": {k: v.to_dict() for k, v in self.nodes.items()},
            "edges": [list(e) for e in self.edges],
            "base_facts": [asdict(b) for b in self.base_facts],
        }


def reg_fact(
    n: int, d: int, trials: int, p, seed: int, certify_regular: bool = True
) -> tuple[bool, dict]:
    """``h1(X_{s_{n,d}}) = 0`` and ``h0(X_{s_{n,d}+1}) = 0`` for generic (2,3,n)-points."""
    s = split_sr(n, d).s
    cfg = place_generic([(Tangent23(), s + 1)], n, p=as_modulus(p))
    a, b = prefix_reports(cfg, d, [s, s + 1], trials, p, seed, certify_regular)
    return a.h1 == 0 and b.h0 == 0, {"n": n, "d": d, "s": s, "h1_at_s": a.h1, "h0_at_s_plus_1": b.h0}


def _base_facts(n_max: int, d_max: int, trials: int, p, seed: int, certify_regular: bool) -> dict[str, BaseFact]:
    facts: dict[str, BaseFact] = {}
    for n in range(4, n_max + 1):
        ok, detail = reg_fact(n, 3, trials, p, derive_seed(seed, 3, n, 3), certify_regular)
        name = f"Reg(n={n},d=3)"
        if n == 4:
            cfg = place_generic([(Tangent23(), 5)], 4, p=as_modulus(p))
            r4, r5 = prefix_reports(cfg, 3, [4, 5], trials, p, derive_seed(seed, 3, 4, 4), certify_regular)
            detail.update({"h0_at_4": r4.h0, "h1_at_4": r4.h1, "h0_at_5": r5.h0})
            ok = r5.h0 == 0
            detail["note"] = "four (2,3,4)-points lie on one cubic; five or more impose all conditions"
        facts[name] = BaseFact(name, ok, detail, "direct rank computation (cubic base case)")
    for d in range(4, d_max + 1):
        ok, detail = reg_fact(3, d, trials, p, derive_seed(seed, 3, 3, d), certify_regular)
        name = f"Reg(n=3,d={d})"
        facts[name] = BaseFact(name, ok, detail, "direct rank computation (P^3 base case)")
    for n in range(4, n_max + 1):
        s = n // 2 + 1
        cfg = place_generic([(Tangent23(), s)], n, p=as_modulus(p))
        rep = prefix_reports(cfg, 2, [s], trials, p, derive_seed(seed, 2, n), certify_regular)[0]
        name = f"Quad(n={n})"
        facts[name] = BaseFact(
            name, rep.h0 == 0, {"n": n, "s": s, "h0": rep.h0}, "direct rank computation (no quadric through s > n/2 points)"
        )
    return facts


def _dependencies(n: int, d: int) -> list[str]:
    deps = [node_key(n - 1, d) if n - 1 >= 4 else f"Reg(n=3,d={d})"]
    for e in (d - 1, d - 2):
        if e >= 4:
            deps.append(node_key(n, e))
        elif e == 3:
            deps.append(f"Reg(n={n},d=3)")
        elif e == 2:
            deps.append(f"Quad(n={n})")
    return deps


def replay_induction(
    n_max: int,
    d_max: int,
    trials: int = DEFAULT_TRIALS,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    certify_regular: bool = True,
) -> InductionTrace:
    """Build and verify the step at every ``4 <= n <= n_max``, ``4 <= d <= d_max``.

    ``Dime`` and ``Degue`` are the trace and residual vanishings of the
    step, ``Prop`` is their conjunction and ``Reg`` is evaluated directly.
    """
    if n_max < 4 or d_max < 4:
        raise ValueError("replay needs n_max >= 4 and d_max >= 4")
    mod = as_modulus(p)
    trace = InductionTrace()
    facts = _base_facts(n_max, d_max, trials, mod, seed, certify_regular)
    trace.base_facts = list(facts.values())
    for n in range(4, n_max + 1):
        for d in range(4, d_max + 1):
            key = node_key(n, d)
            node = NodeVerdict(n, d)
            trace.edges += [(key, dep) for dep in _dependencies(n, d)]
            cell = derive_seed(seed, n, d)
            try:
                step = build_step_thm22(n, d, cell, mod)
            except ConstructionError as exc:
                node.error = str(exc)
                trace.nodes[key] = node
                continue
            rep = verify_step(step, trials, mod, cell, certify_regular)
            node.provenance = step.provenance
            node.step = rep
            node.Dime = rep.trace_h0 == 0
            node.Degue = rep.residual_h0 == 0
            node.Prop = node.Dime and node.Degue
            node.Reg, _ = reg_fact(n, d, trials, mod, derive_seed(cell, 7), certify_regular)
            trace.nodes[key] = node
    return trace
