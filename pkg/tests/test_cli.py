from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from horacekit import __version__
from horacekit.cli import cache_key, cache_lookup, run
from horacekit.config import RunConfig


def call(args, tmp_path, cache=False):
    extra = ["--cache", str(tmp_path / "cache.jsonl")] if cache else ["--no-cache"]
    out = io.StringIO()
    code = run(args + extra, stdout=out)
    return code, out.getvalue()


def test_hilbert_example(tmp_path):
    code, text = call(["hilbert", "--n", "2", "--d", "4", "--spec", "fat:2*5"], tmp_path)
    env = json.loads(text)
    assert code == 0
    assert set(env) == {"command", "parameters", "artifact_version", "reports"}
    assert env["artifact_version"] == __version__
    rep = env["reports"][0]
    assert (rep["h0"], rep["h1"], rep["defective_evidence"]) == (1, 1, True)


def test_hilbert_with_jets(tmp_path):
    code, text = call(["hilbert", "--n", "2", "--d", "3", "--spec", "fat:3", "--jets", "1"], tmp_path)
    assert code == 0 and json.loads(text)["reports"][0]["h0"] == 2
    code, text = call(["hilbert", "--n", "3", "--d", "3", "--spec", "t23*2", "--jets", "2", "--jets-on-h"], tmp_path)
    assert code == 0 and json.loads(text)["reports"][0]["total_length"] == 18


def test_appendix_mod7(tmp_path):
    code, text = call(["appendix", "--which", "mod7"], tmp_path)
    assert code == 0 and len(json.loads(text)["reports"]) == 7


def test_conj1_scan_exit_codes(tmp_path):
    code, text = call(["conj1", "--nmax", "4", "--dmax", "4"], tmp_path)
    reps = json.loads(text)["reports"]
    assert code == 0
    flagged = {(r["problem"]["n"], r["problem"]["d"], r["problem"]["s"]) for r in reps if r["defective"]}
    assert flagged == {(2, 3, 2), (3, 3, 3), (4, 3, 4), (4, 2, 2)}
    code, _ = call(["conj1", "--nmax", "5", "--dmax", "2", "--rule", "printed"], tmp_path)
    assert code == 1


@pytest.mark.parametrize(
    "args",
    [
        ["hilbert", "--n", "3", "--d", "3", "--spec", "zbar:2*4"],
        ["hilbert", "--n", "2", "--d", "3", "--spec", "cube*2"],
        ["hilbert", "--n", "2"],
        ["horace-step", "--inner", "11"],
        ["secant", "--k", "3", "--n", "3", "--d", "6", "--s", "1"],
        ["appendix", "--which", "A9"],
        ["frobnicate"],
        ["hilbert", "--n", "2", "--d", "3", "--spec", "pt", "--trials", "0"],
    ],
)
def test_usage_errors(args, tmp_path, capsys):
    code, _ = call(args, tmp_path)
    assert code == 2


def test_determinism_byte_identical(tmp_path):
    args = ["secant", "--n", "3", "--d", "3", "--s", "3", "--seed", "5", "--exhaustive"]
    _, a = call(args, tmp_path)
    _, b = call(args, tmp_path)
    assert a == b


def test_cache_coherence(tmp_path):
    args = ["check-ah", "--nmax", "3", "--dmax", "3", "--smax", "6", "--seed", "2"]
    code0, fresh = call(args, tmp_path)
    code1, first = call(args, tmp_path, cache=True)
    code2, hit = call(args, tmp_path, cache=True)
    assert fresh == first == hit and code0 == code1 == code2 == 0
    lines = (tmp_path / "cache.jsonl").read_text().splitlines()
    assert len(lines) == 1
    rec = json.loads(lines[0])
    assert set(rec) == {"key", "value", "timestamp"}


def test_cache_key_separates_runs(tmp_path):
    a = cache_key("hilbert", {"n": 2}, RunConfig(seed=1))
    b = cache_key("hilbert", {"n": 2}, RunConfig(seed=2))
    assert a != b
    assert cache_lookup(tmp_path / "missing.jsonl", a) is None


def test_csv_output(tmp_path):
    code, text = call(["check-ah", "--nmax", "2", "--dmax", "3", "--smax", "4", "--format", "csv"], tmp_path)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and len(rows) == 8
    assert {"problem.n", "problem.d", "problem.s", "defective", "matches_list"} <= set(rows[0])


def test_output_file(tmp_path):
    target = tmp_path / "out.json"
    code, text = call(["conj2a", "--k", "1", "--d", "3", "--s", "2", "--output", str(target)], tmp_path)
    assert code == 0 and text == ""
    assert json.loads(target.read_text())["reports"][0]["branch"] == "lemma34-case-i"


def test_horace_step_and_replay(tmp_path):
    code, text = call(["horace-step", "--n", "4", "--d", "4"], tmp_path)
    rep = json.loads(text)["reports"][0]
    assert code == 0 and rep["provenance"] == "lemma23-44" and rep["conclusion_h0"] == 0
    code, text = call(["replay", "--nmax", "4", "--dmax", "5"], tmp_path)
    assert code == 0 and set(json.loads(text)["reports"][0]["nodes"]) == {"n=4,d=4", "n=4,d=5"}


def test_env_prime_override(tmp_path, monkeypatch):
    monkeypatch.setenv("HORACEKIT_PRIME", str(2**31 - 1))
    code, text = call(["hilbert", "--n", "2", "--d", "2", "--spec", "pt*3"], tmp_path)
    env = json.loads(text)
    assert code == 0 and env["parameters"]["prime"] == 2**31 - 1
    monkeypatch.setenv("HORACEKIT_PRIME", "12")
    code, _ = call(["hilbert", "--n", "2", "--d", "2", "--spec", "pt*3"], tmp_path)
    assert code == 2


def test_selftest_and_module_entry(tmp_path):
    code, text = call(["selftest"], tmp_path)
    assert code == 0 and all(r["ok"] for r in json.loads(text)["reports"])
    proc = subprocess.run(
        [sys.executable, "-m", "horacekit", "--version"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and __version__ in proc.stdout
