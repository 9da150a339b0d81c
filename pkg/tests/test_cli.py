import json
import subprocess
import sys
from pathlib import Path

import pytest

from cayley_ci import matgroup as mg
from cayley_ci.ci import Certificate
from cayley_ci.cli import EXIT_BUDGET, EXIT_CLAIM, EXIT_OK, EXIT_USAGE, main, run
from cayley_ci.digraph import Digraph, cayley
from cayley_ci.schur import SRingPartition, generated_sring


def cli(*args):
    proc = subprocess.run([sys.executable, "-m", "cayley_ci", *args], capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_report_schema_and_success_exit():
    code, out, _ = cli("orders", "--q", "3", "--no-timing")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert set(doc) == {"command", "parameters", "claims", "runtime_ms", "artifact_paths"}
    assert doc["command"] == "orders" and doc["parameters"]["q"] == 3
    assert doc["runtime_ms"] == 0
    for c in doc["claims"]:
        assert set(c) == {"name", "expected", "actual", "pass"}
        assert c["pass"] == (c["expected"] == c["actual"])


@pytest.mark.parametrize("args", [
    ("orders",),
    ("orders", "--q", "9"),
    ("orders", "--q", "2"),
    ("nonsense", "--q", "3"),
    ("schur-gen", "--q", "11", "--x", "1"),
])
def test_usage_errors(args):
    code, out, err = cli(*args)
    assert code == EXIT_USAGE and out == "" and "error" in err


def test_claim_failure_exit():
    rep = run("schur-gen", q=5, timing=False)
    assert rep.exit_code == EXIT_CLAIM
    failing = {c.name for c in rep.claims if not c.passed}
    assert failing == {"class count", "<<T>> = V(H, G_e) class by class"}


def test_budget_exit():
    rep = run("z27", budget=100, timing=False)
    assert rep.budget_exhausted and rep.exit_code == EXIT_BUDGET


def test_reports_are_byte_identical(tmp_path, capsys):
    outputs = []
    for _ in range(2):
        assert main(["orbits", "--q", "5", "--out", str(tmp_path), "--no-timing"]) == EXIT_OK
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


def test_artifacts_parse_back(tmp_path):
    q = 3
    rep = run("schur-gen", q=q, out=str(tmp_path), timing=False)
    assert rep.exit_code == EXIT_OK
    H = mg.h_group(q)
    T = mg.build_T(q)
    files = {Path(p).name: Path(p).read_text() for p in rep.artifact_paths}
    assert Digraph.from_text(files[f"cay_H_T_q{q}.txt"]) == cayley(H, T)
    assert SRingPartition.from_text(H, files[f"generated_q{q}.txt"]) == generated_sring(H, T)
    rep = run("non-ci", q=q, out=str(tmp_path), timing=False)
    cert = Certificate.from_json((tmp_path / f"non_ci_q{q}.json").read_text())
    assert cert.replay() == cert.checks


@pytest.mark.parametrize("command", ["orbits", "separate", "alpha", "phi", "two-closed"])
def test_small_q_commands_pass(command):
    for q in (3, 5):
        rep = run(command, q=q, timing=False)
        assert rep.exit_code == EXIT_OK, [c for c in rep.claims if not c.passed]


def test_separation_at_q3_is_reported_without_an_expectation():
    rep = run("separate", q=3, timing=False)
    assert rep.exit_code == EXIT_OK
