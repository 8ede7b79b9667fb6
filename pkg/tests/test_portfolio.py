import math
import time

import pytest

from fpverify.portfolio import (ERROR, INVALID, TIMEOUT, UNKNOWN, VALID, ModelParseError,
                                NoSolverAvailable, SolverDisagreement, SolverSpec, parse_model,
                                parse_solver_list, solve, spec_for)
from fpverify.portfolio.model import decode, parse_sexprs
from fpverify.portfolio.solvers import interpret, logic_theories
from fpverify.vcgen import SmtScript, generate_vcs
from fpverify.vcgen.smt import InputSymbol
from fpverify.frontend import ast as A
from conftest import fixture_program
from stubs import make_stub

D = "(_ FloatingPoint 11 53)"
SAT_X_NAN = SmtScript("QF_FP", (f"(declare-const x {D})",), ("(assert (not (fp.eq x x)))",),
                      inputs=(InputSymbol("x", "x", A.FLOAT64),))
UNSAT = SmtScript("QF_BVFP", (f"(declare-const x {D})",), ("(assert (fp.lt x x))",))


def lit(text):
    return decode(parse_sexprs(text)[0])


def test_literal_forms():
    assert lit("(fp #b0 #b01111111111 #x0000000000000)") == 1.0
    assert math.isnan(lit("(_ NaN 11 53)"))
    z = lit("(fp #b1 #b00000000000 #b0000000000000000000000000000000000000000000000000000)")
    assert z == 0.0 and math.copysign(1, z) < 0
    assert lit("(_ +oo 11 53)") == math.inf and lit("(_ -oo 8 24)") == -math.inf
    assert math.copysign(1, lit("(_ -zero 11 53)")) < 0
    assert lit("(_ bv5 8)") == 5 and lit("#xff") == 255


def test_model_twos_complement_and_functions():
    m = parse_model("((define-fun a () (_ BitVec 8) #xff)\n"
                    " (define-fun f ((x (_ FloatingPoint 11 53))) (_ FloatingPoint 11 53) x)\n"
                    " (define-fun c () Bool true))")
    assert m.get("a", A.INT8) == -1 and m.get("c", A.BOOL) is True and "f" in m.functions


def test_model_parse_errors():
    with pytest.raises(ModelParseError) as info:
        parse_model("((define-fun a () (_ BitVec 8) (weird 1)) (bogus))")
    assert "bogus" in str(info.value)
    with pytest.raises(ModelParseError):
        parse_model("((define-fun a () Bool true)")


def test_interpret_statuses():
    assert interpret("s", "unsat\n", "", 0.1, 10).status == VALID
    assert interpret("s", "unknown\n", "", 0.1, 10).status == UNKNOWN
    assert interpret("s", "unknown\n", "", 9.9, 10).status == TIMEOUT
    assert interpret("s", "timeout\n", "", 1, 10).status == TIMEOUT
    assert interpret("s", '(error "x")', "", 0.1, 10).status == ERROR
    assert interpret("s", "sat\n(garbage", "", 0.1, 10).status == ERROR


def test_logic_theories():
    assert logic_theories("QF_UFBVFP") == {"UF", "BV", "FP"}
    assert logic_theories("QF_BVFP") == {"BV", "FP"}
    assert not SolverSpec("x", "x", theories=frozenset({"BV"})).supports(UNSAT)


def test_solver_list_parsing(monkeypatch):
    monkeypatch.setenv("FPVERIFY_Z3", "/opt/z3")
    specs = parse_solver_list("z3,cvc5:/usr/bin/cvc5")
    assert specs[0].executable == "/opt/z3" and specs[1].executable == "/usr/bin/cvc5"
    assert "--tlimit-per={timeout_ms}" in specs[1].args
    with pytest.raises(ValueError):
        parse_solver_list(" , ")


def test_nan_model(solvers):
    v = solve(SAT_X_NAN, solvers, 30)
    assert v.status == INVALID and math.isnan(v.model.values["x"])
    assert v.solver in {s.name for s in solvers}


def test_every_solver_individually(solvers):
    for s in solvers:
        assert solve(UNSAT, [s], 30).status == VALID
        assert solve(SAT_X_NAN, [s], 30, sequential=True).status == INVALID


def test_no_solver_available(tmp_path):
    with pytest.raises(NoSolverAvailable):
        solve(UNSAT, [make_stub(tmp_path, "error"), SolverSpec("ghost", str(tmp_path / "missing"))], 5)
    with pytest.raises(NoSolverAvailable):
        solve(UNSAT, [], 5)


def test_erroring_solver_does_not_conclude(tmp_path, fast_solver):
    stub = make_stub(tmp_path, "fp_error")
    v = solve(UNSAT, [stub, fast_solver], 30)
    assert v.status == VALID and v.solver == fast_solver.name
    v = solve(UNSAT, [stub, fast_solver], 30, sequential=True)
    assert v.status == VALID and [r.status for r in v.runs] == [ERROR, VALID]


def test_race_beats_sleeper(tmp_path, fast_solver):
    start = time.monotonic()
    v = solve(UNSAT, [make_stub(tmp_path, "sleep"), fast_solver], 1.0)
    assert v.status == VALID and time.monotonic() - start < 10


def test_strongest_inconclusive(tmp_path):
    v = solve(UNSAT, [make_stub(tmp_path, "sleep"), make_stub(tmp_path, "unknown"),
                      make_stub(tmp_path, "fp_error")], 1.0)
    assert v.status == UNKNOWN and v.model is None
    v = solve(UNSAT, [make_stub(tmp_path, "sleep"), make_stub(tmp_path, "fp_error")], 1.0)
    assert v.status == TIMEOUT


def test_disagreement_is_fatal(tmp_path, fast_solver):
    with pytest.raises(SolverDisagreement) as info:
        solve(SAT_X_NAN, [make_stub(tmp_path, "liar"), fast_solver], 30, cross_check=True)
    assert set(info.value.transcripts) == {"stub-liar", fast_solver.name}


def test_model_binds_every_input(fast_solver):
    # the parameter y is irrelevant, so solvers may leave it out of the model
    src = ("def f(x: Double, y: Double): Boolean = { x == x }.ensuring(r => r)")
    from fpverify.frontend import load
    (vc,) = generate_vcs(load(src), checks=None)
    v = solve(vc.script, [fast_solver], 30)
    assert set(v.model.values) >= {"p.x", "p.y"}


def test_single_solver_deterministic(fast_solver):
    (vc,) = generate_vcs(fixture_program("limit"))
    a, b = solve(vc.script, [fast_solver], 60), solve(vc.script, [fast_solver], 60)
    assert a.status == b.status and a.model.text == b.model.text
