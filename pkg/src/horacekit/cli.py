"""Command-line interface.

Every command prints (or writes to ``--output``) an envelope
``{command, parameters, artifact_version, reports}`` as JSON, or the report
rows as CSV.  Exit codes: 0 success, 1 a verification found a violated
expectation, 2 usage error.

Scheme specs (``hilbert --spec``) are comma-separated terms
``kind[:param][*count]`` with kinds ``fat:m``, ``pt`` (= ``fat:1``),
``jet``, ``t23``, ``zbar:k`` and ``zprime:k`` (the last two on ``P^2`` only),
e.g. ``t23*5,jet*2,pt``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path
from typing import Callable

from . import __version__
from .combinat import default_instances, verify_appendix
from .config import DEFAULT_CACHE, RunConfig
from .field_linalg import DEFAULT_PRIME
from .hilbert import hilbert_report, with_jets
from .horace import (
    ConstructionError,
    build_step7_inner,
    build_step_thm22,
    replay_induction,
    verify_step,
)
from .schemes import parse_scheme_spec, place_generic
from .secant import (
    CONJ1_RULES,
    ah_scan,
    check_ah,
    conj1_scan,
    conj2a_classify,
    conj2a_grid,
    secant_dim,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

APPENDIX_FAMILIES = ("A1", "A2", "A3", "A4", "MOD7")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- serialization


def _jsonable(obj):
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "__dataclass_fields__"):
        from dataclasses import asdict

        return _jsonable(asdict(obj))
    return obj


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def to_csv(reports: list[dict]) -> str:
    rows = [_flatten(r) for r in reports]
    cols: list[str] = []
    for r in rows:
        cols += [c for c in r if c not in cols]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def envelope(command: str, params: dict, reports: list[dict]) -> dict:
    return {"command": command, "parameters": params, "artifact_version": __version__, "reports": reports}


def render(env: dict, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(env["reports"])
    return json.dumps(env, indent=2) + "\n"


# ---------------------------------------------------------------- cache


def cache_key(command: str, params: dict, run: RunConfig) -> str:
    body = {
        "command": command,
        "parameters": params,
        "prime": run.prime,
        "seed": run.seed,
        "trials": run.trials,
        "certify_regular": run.certify_regular,
        "version": __version__,
    }
    return json.dumps(body, sort_keys=True, separators=(",", ":"))


def cache_lookup(path: Path, key: str):
    if not path.exists():
        return None
    found = None
    with path.open() as fh:
        for line in fh:
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                continue
            if rec.get("key") == key:
                found = rec["value"]
    return found


def cache_store(path: Path, key: str, value) -> None:
    rec = {"key": key, "value": value, "timestamp": time.time()}
    with path.open("a") as fh:
        fh.write(json.dumps(rec, separators=(",", ":")) + "\n")


# ---------------------------------------------------------------- commands


def _cmd_hilbert(a, run: RunConfig):
    spec = parse_scheme_spec(a.spec, a.n)
    cfg = place_generic(spec, a.n, p=run.prime)
    if a.jets:
        cfg = with_jets(cfg, a.jets, True if a.jets_on_h else None)
    rep = hilbert_report(cfg, a.d, run.trials, run.prime, run.seed, run.certify_regular)
    return [rep.to_dict()]


def _cmd_secant(a, run: RunConfig):
    rep = secant_dim(a.k, a.n, a.d, a.s, run.trials, run.prime, run.seed, run.certify_regular)
    return [rep.to_dict()]


def _cmd_check_ah(a, run: RunConfig):
    if a.s is not None:
        if a.n is None or a.d is None:
            raise UsageError("check-ah with --s also needs --n and --d")
        return [check_ah(a.n, a.d, a.s, run.trials, run.prime, run.seed, run.certify_regular).to_dict()]
    reps = ah_scan(a.nmax, a.dmax, a.smax, run.trials, run.prime, run.seed, run.certify_regular)
    return [r.to_dict() for r in reps]


def _cmd_conj1(a, run: RunConfig):
    reps = conj1_scan(
        a.nmax, a.dmax, run.trials, run.prime, run.seed, run.certify_regular, a.rule, a.nmin, a.dmin
    )
    return [r.to_dict() for r in reps]


def _cmd_conj2a(a, run: RunConfig):
    if a.s is not None:
        if a.k is None or a.d is None:
            raise UsageError("conj2a with --s also needs --k and --d")
        return [conj2a_classify(a.k, a.d, a.s, run.trials, run.prime, run.seed, run.certify_regular).to_dict()]
    grid = conj2a_grid(a.kmax, a.dmax, a.smax, run.trials, run.prime, run.seed, run.certify_regular)
    return [v.to_dict() for v in grid]


def _cmd_horace_step(a, run: RunConfig):
    if a.inner is not None:
        step = build_step7_inner(a.inner, run.seed, run.prime)
    else:
        if a.n is None or a.d is None:
            raise UsageError("horace-step needs --n and --d (or --inner D)")
        step = build_step_thm22(a.n, a.d, run.seed, run.prime)
    rep = verify_step(step, run.trials, run.prime, run.seed, run.certify_regular)
    out = rep.to_dict()
    out.update(step.counts())
    return [out]


def _cmd_replay(a, run: RunConfig):
    tr = replay_induction(a.nmax, a.dmax, run.trials, run.prime, run.seed, run.certify_regular)
    return [tr.to_dict()]


def _cmd_appendix(a, run: RunConfig):
    which = APPENDIX_FAMILIES if a.which.upper() == "ALL" else (a.which.upper(),)
    out = []
    for w in which:
        if w not in APPENDIX_FAMILIES:
            raise UsageError(f"unknown family {a.which!r}; choose from {', '.join(APPENDIX_FAMILIES)} or all")
        dmax = a.dmax if a.dmax is not None else (200 if w == "A4" else 60)
        out += [_jsonable(v) for v in verify_appendix(w, default_instances(w, a.nmax, dmax))]
    return out


def _cmd_selftest(a, run: RunConfig):
    from .combinat import split_sr

    checks = []

    def record(name, ok, detail):
        checks.append({"check": name, "ok": bool(ok), "detail": detail})

    rep = hilbert_report(place_generic(parse_scheme_spec("fat:2*5"), 2, p=run.prime), 4, run.trials, run.prime, run.seed)
    record("five double points on plane quartics", rep.h0 == 1 and rep.h1 == 1, rep.to_dict())
    rep = hilbert_report(place_generic(parse_scheme_spec("t23*2"), 4, p=run.prime), 2, run.trials, run.prime, run.seed)
    record("two (2,3,4)-points on quadrics", rep.h0 == 1, rep.to_dict())
    rep = hilbert_report(place_generic(parse_scheme_spec("t23*5"), 3, p=run.prime), 4, run.trials, run.prime, run.seed)
    record("five (2,3,3)-points on quartics", rep.h0 == 0 and rep.h1 == 0, rep.to_dict())
    r3 = [split_sr(3, d).r for d in range(4, 201)]
    record("r_{3,d} never 5", 5 not in r3, {"values": sorted(set(r3))})
    step = verify_step(build_step_thm22(4, 4, run.seed, run.prime), run.trials, run.prime, run.seed)
    record("degree-4 start on P^4", step.step_valid and step.implication_observed, step.to_dict())
    return checks


# ---------------------------------------------------------------- verdicts


def _failed(command: str, reports: list[dict]) -> bool:
    if command in ("check-ah", "conj1"):
        return any(r.get("matches_list") is False for r in reports)
    if command == "conj2a":
        return any(r["branch"] == "inconsistent" or not r["sound"] for r in reports)
    if command == "horace-step":
        return any(not (r["step_valid"] and r["implication_observed"]) for r in reports)
    if command == "replay":
        nodes = reports[0]["nodes"].values()
        facts = reports[0]["base_facts"]
        bad_node = any(v["Prop"] is not True for v in nodes)
        bad_step = any(v["step"] is not None and not v["step"]["implication_observed"] for v in nodes)
        return bad_node or bad_step or any(not f["holds"] for f in facts)
    if command == "appendix":
        return any(r["hypothesis_met"] and not r["holds"] for r in reports)
    if command == "selftest":
        return any(not r["ok"] for r in reports)
    return False


COMMANDS: dict[str, Callable] = {
    "hilbert": _cmd_hilbert,
    "secant": _cmd_secant,
    "check-ah": _cmd_check_ah,
    "conj1": _cmd_conj1,
    "conj2a": _cmd_conj2a,
    "horace-step": _cmd_horace_step,
    "replay": _cmd_replay,
    "appendix": _cmd_appendix,
    "selftest": _cmd_selftest,
}

_GLOBAL = ("prime", "seed", "trials", "format", "cache", "no_cache", "output", "exhaustive", "command")


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--prime", type=lambda s: int(s, 0), default=None, help=f"prime modulus (default {DEFAULT_PRIME}, env HORACEKIT_PRIME)")
    g.add_argument("--seed", type=int, default=0, help="root seed (default 0)")
    g.add_argument("--trials", type=int, default=3, help="random placements per query (default 3)")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--cache", default=None, help=f"JSONL cache file (default {DEFAULT_CACHE}, env HORACEKIT_CACHE)")
    g.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    g.add_argument("--output", default=None, help="write the report here instead of stdout")
    g.add_argument("--exhaustive", action="store_true", help="run every trial even after full rank is reached")

    ap = argparse.ArgumentParser(prog="horacekit", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hilbert", parents=[common], help="Hilbert function of a generic union in one degree")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--spec", required=True, help="scheme spec, e.g. t23*5,jet*2,pt")
    p.add_argument("--jets", type=int, default=0, help="add this many generic 2-jets")
    p.add_argument("--jets-on-h", action="store_true", help="place the added jets on x_n = 0, tangent to it")

    p = sub.add_parser("secant", parents=[common], help="dimension of a secant variety of an osculating variety")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, required=True)

    p = sub.add_parser("check-ah", parents=[common], help="double points against the classical exception list")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--smax", type=int, default=15)

    p = sub.add_parser("conj1", parents=[common], help="scan tangential secant defects")
    p.add_argument("--nmin", type=int, default=2)
    p.add_argument("--dmin", type=int, default=2)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--rule", choices=sorted(CONJ1_RULES), default="corrected", help="exception list to compare against")

    p = sub.add_parser("conj2a", parents=[common], help="plane osculating classification")
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--dmax", type=int, default=12)
    p.add_argument("--smax", type=int, default=12)

    p = sub.add_parser("horace-step", parents=[common], help="build and verify one Horace step")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--inner", type=int, metavar="D", help="the P^4 inner step for degree D (needs r_{3,D} = 6)")

    p = sub.add_parser("replay", parents=[common], help="replay the induction as a certificate tree")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--dmax", type=int, required=True)

    p = sub.add_parser("appendix", parents=[common], help="exact verification of the counting inequalities")
    p.add_argument("--which", default="all", help="A1, A2, A3, A4, MOD7 or all")
    p.add_argument("--nmax", type=int, default=60)
    p.add_argument("--dmax", type=int, default=None, help="default 60 (200 for A4)")

    sub.add_parser("selftest", parents=[common], help="quick end-to-end sanity checks")
    return ap


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        run_cfg = RunConfig.from_env(
            prime=a.prime,
            seed=a.seed,
            trials=a.trials,
            certify_regular=not a.exhaustive,
            cache_path=a.cache,
            use_cache=not a.no_cache,
        )
    except ValueError as exc:
        print(f"horacekit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    params = {k: v for k, v in sorted(vars(a).items()) if k not in _GLOBAL}
    key = cache_key(a.command, params, run_cfg)
    cache = Path(run_cfg.cache_path)
    reports = cache_lookup(cache, key) if run_cfg.use_cache and a.command != "selftest" else None
    if reports is None:
        try:
            reports = _jsonable(COMMANDS[a.command](a, run_cfg))
        except (UsageError, ConstructionError, ValueError) as exc:
            print(f"horacekit: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if run_cfg.use_cache and a.command != "selftest":
            cache_store(cache, key, reports)
    params_out = dict(params, prime=run_cfg.prime, seed=run_cfg.seed, trials=run_cfg.trials, certify_regular=run_cfg.certify_regular)
    text = render(envelope(a.command, params_out, reports), a.format)
    if a.output:
        Path(a.output).write_text(text)
    else:
        stdout.write(text)
    return EXIT_FAIL if _failed(a.command, reports) else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
