from __future__ import annotations

import functools
import json
import subprocess
import sys

import pytest

from endodyn import cli
from endodyn import verify as suites


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def small_verify(monkeypatch):
    """Shrink the exhaustive part of ``verify`` so the CLI plumbing can be exercised quickly."""
    small = functools.partial(
        suites.run_all,
        census_max_n=16,
        completeness_max_n=10,
        formula_limit=64,
    )

    def run_all(seed, budget, jobs=1, progress=None):
        pool = suites.PoolConfig(abelian_max_order=12, cyclic_max_n=16, seed=seed)
        return small(seed, budget, jobs, progress, pool=pool)

    monkeypatch.setattr(cli.suites, "run_all", run_all)


def test_analyze_cyclic(capsys):
    code, out, _ = run(capsys, "analyze", "--n", "12", "--a", "4")
    assert code == 0
    assert "nil: 4" in out and "per: 3" in out
    assert "behavior: (4)" in out and "cycles: [(1,3)]" in out


def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", "--n", "12", "--a", "4", "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["ok"]
    assert report["fitting"]["nil_order"] == 4 and report["fitting"]["per_order"] == 3
    assert report["invariant"] == {"behavior": [4], "cycles": [[1, 3]]}
    assert out == json.dumps(report, indent=2, sort_keys=True) + "\n"


def test_analyze_table_file(capsys, data_dir):
    code, out, _ = run(capsys, "analyze", "--input", str(data_dir / "s3_sign.json"))
    assert code == 0
    assert "nil: 3" in out and "per: 2" in out and "nil normal: confirmed" in out


def test_analyze_identity(capsys):
    code, out, _ = run(capsys, "analyze", "--n", "5", "--a", "1")
    assert code == 0 and "cycles: [(1,5)]" in out and "FAILED" not in out


@pytest.mark.parametrize(
    "argv",
    [
        ("analyze", "--n", "0", "--a", "1"),
        ("analyze", "--n", "5"),
        ("analyze", "--input", "/nonexistent/spec.json"),
        ("realize", "--chain", "2,4"),
        ("realize", "--chain", "4,x"),
        ("census",),
        ("census", "--n", "0"),
        ("graph", "--n", "3", "--a", "1", "--output", "/nonexistent/dir/g.dot"),
        ("verify", "--budget", "-1"),
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith(f"endodyn {argv[0]}:")


def test_invalid_homomorphism_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"type": "table", "builtin": "S3", "map": [0, 1, 2, 0, 0, 1]}))
    code, _, err = run(capsys, "analyze", "--input", str(path))
    assert code == 2 and "HomomorphismViolation" in err


def test_theorem_failure_exits_1_with_reproducer(capsys, monkeypatch):
    from endodyn.dynamics import FittingReport

    broken = FittingReport(1, 1, 0, 0, False, True, True, True)
    monkeypatch.setattr(cli, "fitting_check", lambda F: broken)
    code, out, _ = run(capsys, "analyze", "--n", "6", "--a", "2")
    assert code == 1
    assert "reproducer:" in out and '"n": 6' in out


def test_census_single(capsys):
    code, out, _ = run(capsys, "census", "--n", "8", "--brute-force")
    assert code == 0 and "6 = 6" in out
    code, out, _ = run(capsys, "census", "--n", "1")
    assert code == 0 and "total 1" in out and "overlap" in out


def test_census_json_schema(capsys):
    code, out, _ = run(capsys, "census", "--n", "12", "--brute-force", "--format", "json")
    report = json.loads(out)
    assert code == 0
    assert report["n"] == 12 and report["agree"] is True
    assert report["formula"] == {"total": 12, "trees": 2, "cycle_unions": 4, "mixed": 6}
    assert report["bruteForce"] == report["formula"]
    assert len(report["classes"]) == 12
    assert set(report["classes"][0]) == {"rep", "behavior", "cycles", "size"}
    assert sum(c["size"] for c in report["classes"]) == 12


def test_census_range(capsys):
    code, out, _ = run(capsys, "census", "--max-n", "40", "--brute-force")
    assert code == 0 and out.strip() == "census 1..40: formula vs brute force, all agree"


def test_census_mismatch_exits_1(capsys, monkeypatch):
    from endodyn.census import CensusCounts

    monkeypatch.setattr("endodyn.census.formula_count", lambda n: CensusCounts(99, 1, 1, 97))
    code, out, _ = run(capsys, "census", "--n", "6", "--brute-force")
    assert code == 1 and "99 != " in out


def test_realize(capsys, tmp_path):
    code, out, _ = run(capsys, "realize", "--chain", "4,2")
    assert code == 0
    assert "group: (4, 2)" in out and "matrix: [[0, 2], [0, 0]]" in out and "verified" in out
    target = tmp_path / "realized.json"
    code, out, _ = run(capsys, "realize", "--chain", "6", "--output", str(target))
    assert code == 0
    assert json.loads(target.read_text()) == {"type": "cyclic", "n": 6, "a": 0}
    code, out, _ = run(capsys, "analyze", "--input", str(target))
    assert code == 0 and "behavior: (6)" in out


def test_graph(capsys, tmp_path):
    code, out, _ = run(capsys, "graph", "--n", "4", "--a", "0")
    assert code == 0 and out.count(" -> 0;") == 4
    target = tmp_path / "g.dot"
    code, _, _ = run(capsys, "graph", "--n", "9", "--a", "3", "--output", str(target))
    edges = [line for line in target.read_text().splitlines() if "->" in line]
    assert edges == [f"  {x} -> {3 * x % 9};" for x in range(9)]
    code, out, _ = run(capsys, "graph", "--n", "7", "--a", "2", "--labels")
    assert out.count("[label=") == 7


def test_verify_is_deterministic(capsys, small_verify):
    first = run(capsys, "verify", "--seed", "42", "--budget", "30")
    second = run(capsys, "verify", "--seed", "42", "--budget", "30")
    assert first == second and first[0] == 0
    assert "all suites passed" in first[1]
    assert "tensor_decomposition: 30 checked" in first[1]


def test_verify_budget_zero_runs_exhaustive_only(capsys, small_verify):
    code, out, _ = run(capsys, "verify", "--budget", "0", "--format", "json")
    report = json.loads(out)
    names = {s["name"] for s in report["suites"]}
    assert code == 0 and report["ok"]
    assert "tensor_decomposition" not in names and "fitting" in names


def test_verify_failure_exits_1(capsys, small_verify, monkeypatch):
    def fake_rejection():
        r = suites.SuiteResult("rigidity_rejects_non_fdg")
        r.checked = 1
        r.fail({"graph": "made up", "succ": [0]})
        return r

    monkeypatch.setattr(suites, "rigidity_rejection_suite", fake_rejection)
    code, out, _ = run(capsys, "verify", "--budget", "0")
    assert code == 1 and "FAIL rigidity_rejects_non_fdg" in out and "reproducer:" in out


def test_jobs_env_fallback(monkeypatch):
    monkeypatch.setenv("ENDODYN_JOBS", "3")
    assert cli.build_parser().parse_args(["census", "--n", "4"]).jobs == 3
    monkeypatch.setenv("ENDODYN_JOBS", "junk")
    assert cli.build_parser().parse_args(["census", "--n", "4"]).jobs == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "endodyn", "analyze", "--n", "12", "--a", "4", "--format", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["behavior"] == [4]


@pytest.mark.slow
def test_full_verify_run(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "42", "--budget", "1000")
    assert code == 0, out
    assert "all suites passed (seed 42, budget 1000)" in out
    assert "PASS tensor_decomposition: 1000 checked, 0 violations" in out
