import itertools
import json
import subprocess
import sys

import jsonschema
import pytest

from fpverify.driver import (EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, EXIT_TOOL_ERROR, Config,
                             bench_command, bench_csv, check_command, exit_code_for, file_verdicts, schema)
from fpverify.driver.cli import main, parse_value
from fpverify.frontend import ast as A
from fpverify.portfolio import SolverSpec, STATUSES
from conftest import FIXTURES
from stubs import make_stub


def fx(name):
    return str(FIXTURES / f"{name}.fpl")


@pytest.mark.parametrize("combo", [c for n in range(0, 3) for c in itertools.combinations(STATUSES, n)])
def test_exit_code_total(combo):
    code = exit_code_for(combo)
    if "invalid" in combo:
        assert code == EXIT_INVALID
    elif "error" in combo:
        assert code == EXIT_TOOL_ERROR
    elif {"unknown", "timeout"} & set(combo):
        assert code == EXIT_INCONCLUSIVE
    else:
        assert code == EXIT_OK


def test_empty_program(tmp_path):
    p = tmp_path / "empty.fpl"
    p.write_text("")
    code, report = check_command([p], Config(solvers=[]))
    assert code == 0 and report.results == []


def test_parse_error_is_tool_error(tmp_path):
    p = tmp_path / "bad.fpl"
    p.write_text("def f(x: Double) = x +")
    code, report = check_command([p], Config())
    assert code == EXIT_TOOL_ERROR and "ParseError" in report.errors[0]


def test_no_solver_is_tool_error(tmp_path):
    code, report = check_command([fx("limit")], Config(solvers=[make_stub(tmp_path, "error")]))
    assert code == EXIT_TOOL_ERROR and "NoSolverAvailable" in report.errors[0]


def test_unknown_suppression_is_config_error(tmp_path):
    from fpverify.checks import CheckConfig
    cfg = Config(checks=CheckConfig(per_function_suppressions=frozenset({"nope"})))
    code, report = check_command([fx("limit")], cfg)
    assert code == EXIT_TOOL_ERROR and report.results == []


def test_report_schema_and_rendering(tmp_path, fast_solver):
    out = tmp_path / "r.json"
    code, report = check_command([fx("limit"), fx("spurious_sin")],
                                 Config(solvers=[fast_solver], timeout=60, json_path=out))
    data = json.loads(out.read_text())
    jsonschema.validate(data, schema())
    assert code == EXIT_INVALID and data["exit_code"] == 1
    assert sum(data["summary"].values()) == len(report.results) == 3
    limit_vc = data["functions"][0]["vcs"][0]
    assert limit_vc["classification"] == "Confirmed"
    assert limit_vc["model"]["maxMagnitude"]["decimal"] == "NaN"
    text = report.render()
    assert "Spurious" in text and "maxMagnitude = NaN" in text


def test_sequential_single_solver_reproducible(tmp_path, fast_solver):
    reports = []
    for _ in range(2):
        _, r = check_command([fx("limit"), fx("stormday")],
                             Config(solvers=[fast_solver], timeout=60, sequential=True))
        data = r.to_json()
        for fn in data["functions"]:
            for vc in fn["vcs"]:
                vc["elapsed_ms"] = 0
        reports.append(data)
    assert reports[0] == reports[1]


def test_bench_matrix(tmp_path, fast_solver):
    d = tmp_path / "vcs"
    main(["dump-vcs", fx("limit"), fx("stormday_fixed"), "--out", str(d)])
    rows = bench_command(d, [fast_solver, make_stub(tmp_path, "fp_error")], 60, repetitions=5)
    assert len(rows) == 4 and all(len(r.times_ms) == 5 for r in rows)
    assert {r.status for r in rows if r.solver == "stub-fp_error"} == {"error"}
    csv_text = bench_csv(rows)
    assert csv_text.splitlines()[0].startswith("file,solver,status,min_ms,median_ms,max_ms,run1_ms")
    assert len(csv_text.splitlines()) == 5
    verdicts = file_verdicts(rows)
    assert sorted(verdicts.values()) == ["invalid", "valid"]


def test_bench_empty_and_unreadable(tmp_path, fast_solver, caplog):
    assert bench_command(tmp_path, [fast_solver], 5, 1) == []
    (tmp_path / "bad.smt2").write_bytes(b"\xff\xfe\x00")
    assert bench_command(tmp_path, [fast_solver], 5, 1) == []
    assert "skipping" in caplog.text


def test_parse_value():
    assert parse_value("1.5", A.FLOAT64) == 1.5
    assert parse_value("0x1p-2", A.FLOAT64) == 0.25
    assert parse_value("-Infinity", A.FLOAT32) == float("-inf")
    assert parse_value("300.7f", A.FLOAT32) != 300.7
    assert parse_value("-7", A.INT8) == -7 and parse_value("true", A.BOOL) is True
    with pytest.raises(ValueError):
        parse_value("maybe", A.BOOL)


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "fpverify.driver.cli", *args],
                          capture_output=True, text=True, timeout=600)


def test_cli_eval():
    r = _cli("eval", fx("stormday"), "accuracyPercent", "--args", "1073741832,730144766")
    assert r.returncode == 0 and r.stdout.startswith("-2.9586256e-05")
    r = _cli("eval", fx("limit"), "limit", "--args", "3.0,4.0,1.0")
    assert r.returncode == 0 and r.stdout.strip().startswith("(0.6")
    r = _cli("eval", fx("limit"), "limit", "--args", "Infinity,1.0,1.0", "--check-contracts")
    assert r.returncode == 1 and "precondition" in r.stdout


def test_cli_check_and_dump(tmp_path):
    r = _cli("check", fx("stormday_fixed"), "--solvers", "bitwuzla", "--timeout", "120",
             "--dump-vcs", str(tmp_path), "--json", str(tmp_path / "r.json"))
    assert r.returncode == 0, r.stdout + r.stderr
    assert [p.name for p in tmp_path.glob("*.smt2")] == ["accuracyPercent_postcondition_0.smt2"]
    r = _cli("check", str(tmp_path / "missing.fpl"))
    assert r.returncode == EXIT_TOOL_ERROR


def test_cli_fuzz(tmp_path):
    r = _cli("fuzz", "--function", "exp", "--n", "500", "--seed", "4", "--json", str(tmp_path / "f.json"))
    assert r.returncode == 0 and "seed 4" in r.stdout
    assert json.loads((tmp_path / "f.json").read_text())["functions"][0]["violations"] == 0
