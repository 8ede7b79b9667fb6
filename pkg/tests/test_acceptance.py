"""Acceptance suite: one test per criterion, each enforcing its stated budget.

Run directly (``python tests/test_acceptance.py``) or through pytest; either
way a ``criterion N PASS|FAIL`` line is printed per criterion.
"""
import math
import random
import struct
import time
from dataclasses import replace
from fractions import Fraction

import pytest

from fpverify.checks import CheckConfig
from fpverify.driver import Config, bench_command, check_command, file_verdicts
from fpverify.floats import F32, F64, to_f32
from fpverify.frontend import TypeCheckError, ast as A, load
from fpverify.frontend.printer import print_literal
from fpverify.interp import Evaluator, classify_counterexample, evaluate
from fpverify.mathspec import FUNCTIONS, contract_for, fast_two_sum, fuzz_contract
from fpverify.portfolio import (INVALID, VALID, NoSolverAvailable, default_solvers, run_solver,
                                solve, spec_for)
from fpverify.vcgen import contract_script, dump_vcs, generate_vcs, prepare
from conftest import FIXTURES, fixture_program
from progen import random_closed_expr, random_program
from stubs import make_stub

SEED = 20240611


def fx(name):
    return str(FIXTURES / f"{name}.fpl")


def _one(report, kind):
    (r,) = [r for r in report.results if r.kind == kind]
    return r


@pytest.fixture(scope="module")
def bitwuzla(solvers):
    return next((s for s in solvers if s.name == "bitwuzla"), solvers[0])


def test_criterion_01_stormday_accuracy(bitwuzla):
    start = time.monotonic()
    code, report = check_command([fx("stormday")], Config(solvers=[bitwuzla], timeout=120))
    vc = _one(report, "postcondition")
    assert code == 1 and vc.status == INVALID and vc.classification == "Confirmed"
    out = evaluate(fixture_program("stormday"), "accuracyPercent", [1073741832, 730144766])
    assert struct.pack(">f", out) == struct.pack(">f", -2.9586256e-05)
    code, report = check_command([fx("stormday_fixed")], Config(solvers=[bitwuzla], timeout=120))
    assert code == 0 and _one(report, "postcondition").status == VALID
    assert time.monotonic() - start < 120


def test_criterion_02_gradient_nan(solvers):
    start = time.monotonic()
    prog = fixture_program("gradient")
    (vc,) = generate_vcs(prog)
    v = solve(vc.script, solvers, 300)
    assert v.status == INVALID
    c = classify_counterexample(prepare(prog), vc, v.model)
    assert c.status == "Confirmed"
    label, pred = c.args["label"], c.args["prediction"]
    assert math.isnan(evaluate(prog, "gradient", [label, pred]))
    # an overflow to infinity meets a zero (or a second infinity) on the way to NaN
    assert math.isinf(4.0 * label) or math.isnan(2.0 * label * pred)
    (fixed,) = generate_vcs(fixture_program("gradient_fixed"))
    assert fixed.uses_opaque and "(declare-fun exp64 (" in fixed.text()
    assert solve(fixed.script, solvers, 300).status == VALID
    assert time.monotonic() - start < 300


def test_criterion_03_limit_nan_threshold(solvers):
    start = time.monotonic()
    code, report = check_command([fx("limit")], Config(solvers=solvers, timeout=60))
    vc = _one(report, "nanCheck")
    assert vc.status == INVALID and vc.model["maxMagnitude"]["decimal"] == "NaN"
    assert vc.classification == "Confirmed"
    assert "!maxMagnitude.isNaN" in (FIXTURES / "limit_fixed.fpl").read_text()
    code, report = check_command([fx("limit_fixed")], Config(solvers=solvers, timeout=60))
    assert code == 0 and [r.status for r in report.results] == [VALID]
    assert time.monotonic() - start < 60


def test_criterion_04_modulo_rejection():
    with pytest.raises(TypeCheckError) as info:
        load("def f(): Double = { 14.5 % 1.5 }")
    (d,) = info.value.diagnostics
    assert d.kind == "fp-modulo-unsupported" and "x - n * floor(x / n)" in d.hint
    prog = load("def f(x: Double, n: Double): Double = { x - n * floor(x / n) }")
    assert evaluate(prog, "f", [14.5, 1.5]) == 1.0


def _reference_cast(x: float, bits: int) -> int:
    """Truncate toward zero, clamp to the 32- or 64-bit range, wrap to narrow widths."""
    if math.isnan(x):
        return 0
    wide = 64 if bits == 64 else 32
    lo, hi = -(2 ** (wide - 1)), 2 ** (wide - 1) - 1
    t = math.trunc(x) if math.isfinite(x) else (hi if x > 0 else lo)
    t = max(lo, min(hi, t))
    m = t % (2 ** bits)
    return m - 2 ** bits if m >= 2 ** (bits - 1) else m


def test_criterion_05_cast_semantics():
    names = {8: "toByte", 16: "toShort", 32: "toInt", 64: "toLong"}
    table = [(math.nan, 32, 0), (1e10, 32, 2 ** 31 - 1), (-1e10, 32, -2 ** 31), (to_f32(300.7), 8, 44)]
    rng = random.Random(SEED)
    mismatches = 0
    for src, fmt in (("Double", F64), ("Float", F32)):
        for bits, method in names.items():
            prog = load(f"def f(x: {src}): Long = {{ x.{method}.toLong }}")
            ev = Evaluator(prog)
            for x, b, want in table:
                if b == bits and (fmt is F64 or to_f32(x) == x or math.isnan(x)):
                    assert ev.call("f", (x if fmt is F64 else to_f32(x),)) == want
            for _ in range(10 ** 5):
                r = rng.random()
                if r < 0.4:
                    x = struct.unpack(">d", rng.getrandbits(64).to_bytes(8, "big"))[0]
                elif r < 0.8:
                    x = rng.uniform(-2.0 ** (bits + 1), 2.0 ** (bits + 1))
                else:
                    x = rng.choice([math.inf, -math.inf, math.nan, -0.0, 2.0 ** 31, -2.0 ** 31 - 1,
                                    2.0 ** 63, 127.99, -128.5, 32767.5, 2.0 ** 31 - 0.5])
                if fmt is F32:
                    x = to_f32(x)
                mismatches += ev.call("f", (x,)) != _reference_cast(x, bits)
    assert mismatches == 0


def test_criterion_06_axiom_validation(solvers):
    start = time.monotonic()
    for name in FUNCTIONS:
        script = contract_script(contract_for(name, F64))
        for s in solvers:
            assert solve(script, [s], 120).status == INVALID, f"{name} axioms unsatisfiable for {s.name}"
    for i, name in enumerate(FUNCTIONS):
        report = fuzz_contract(contract_for(name, F64), n=10 ** 6, seed=SEED + i)
        assert report.passed, f"{name}: {report.violation_count} violations, first {report.violations[:3]}"
    assert time.monotonic() - start < 600


def _literal(v, ty):
    text = print_literal(A.Literal(v, ty))
    return f"({text})" if text.startswith("-") else text


def test_criterion_07_differential_soundness(fast_solver):
    invalid = confirmed = 0
    for seed in range(1000):
        prog = load(random_program(SEED + seed))
        pp = prepare(prog)
        for vc in generate_vcs(prog):
            assert not vc.uses_opaque
            v = solve(vc.script, [fast_solver], 60)
            if v.status == INVALID:
                invalid += 1
                c = classify_counterexample(pp, vc, v.model)
                assert c.status == "Confirmed", (seed, vc.kind, c.trace)
                confirmed += 1
    assert invalid == confirmed > 0
    for seed in range(1000):
        expr, ty = random_closed_expr(SEED + seed)
        plain = load(f"def g(): {ty} = {{ {expr} }}")
        value = evaluate(plain, "g", [])
        rty = plain.functions[0].result
        if isinstance(rty, A.FloatType) and math.isnan(value):
            goal = "r.isNaN"
        elif isinstance(rty, A.FloatType):
            sign = "" if math.copysign(1.0, value) > 0 else "!"
            goal = f"r == {_literal(value, rty)} && {sign}r.isPositiveSign"
        else:
            goal = f"r == {_literal(value, rty)}"
        prog = load(f"def g(): {ty} = {{ {expr} }}.ensuring(r => {goal})")
        (vc,) = [vc for vc in generate_vcs(prog, CheckConfig(False, False)) if vc.kind == "postcondition"]
        assert solve(vc.script, [fast_solver], 60).status == VALID, (expr, value)


def test_criterion_08_spurious_detection(solvers):
    prog = fixture_program("spurious_sin")
    (vc,) = [vc for vc in generate_vcs(prog) if vc.kind == "postcondition"]
    v = solve(vc.script, solvers, 60)
    assert v.status == INVALID and vc.uses_opaque
    assert classify_counterexample(prepare(prog), vc, v.model).status == "Spurious"
    assert math.sin(0.5) > 0.4


def test_criterion_09_portfolio_robustness(tmp_path):
    fixtures = ["stormday", "stormday_fixed", "gradient", "gradient_fixed", "limit", "limit_fixed",
                "spurious_sin"]
    for kind in ("error", "fp_error"):
        portfolio = [make_stub(tmp_path, kind), spec_for("cvc5"), spec_for("z3")]
        for name in fixtures:
            for vc in generate_vcs(fixture_program(name)):
                v = solve(vc.script, portfolio, 300)
                assert v.status in (VALID, INVALID), (kind, name, vc.kind, v.status)
    error, fp_error = make_stub(tmp_path, "error"), make_stub(tmp_path, "fp_error")
    script = generate_vcs(fixture_program("limit"))[0].script
    for stubs in ([error], [error, replace(error, name="stub-error-2")]):
        with pytest.raises(NoSolverAvailable):
            solve(script, stubs, 10)
    # a solver that passes the probe but rejects every FP script yields an error, not a verdict
    assert solve(script, [fp_error], 10).status == "error"


def test_criterion_10_fast_two_sum():
    rng = random.Random(SEED)
    failures = 0
    for _ in range(10 ** 5):
        a = rng.uniform(-1, 1) * 2.0 ** rng.randint(-300, 300)
        b = rng.uniform(-1, 1) * 2.0 ** rng.randint(-300, 300)
        if abs(a) < abs(b):
            a, b = b, a
        s, t = fast_two_sum(a, b)
        failures += Fraction(a) + Fraction(b) != Fraction(s) + Fraction(t) or s != a + b
    assert failures == 0


def test_criterion_11_dump_fidelity(tmp_path, solvers):
    files = [fx(n) for n in ("stormday", "stormday_fixed", "gradient", "gradient_fixed", "limit",
                             "limit_fixed", "spurious_sin")]
    out = tmp_path / "vcs"
    code, report = check_command(files, Config(solvers=solvers, timeout=300, dump_dir=out))
    dumped = sorted(out.glob("*.smt2"))
    assert len(dumped) == len(report.results) > 0
    for path in dumped:
        text = path.read_text()
        for s in solvers:
            r = run_solver(s, text, 10)
            first = r.output.strip().splitlines()[0] if r.output.strip() else ""
            assert first in ("sat", "unsat", "unknown", "timeout") or r.status == "timeout", (s.name, path.name, r.output[:200])
            errors = [ln for ln in r.output.splitlines() if ln.startswith("(error")]
            # only the model request after an unsat answer may be refused
            assert all("model" in ln for ln in errors), (s.name, path.name, errors)
    rows = bench_command(out, solvers, timeout=60, repetitions=1)
    verdicts = file_verdicts(rows)
    expected = {f"{r.function}_{r.kind}_{r.id}.smt2": r.status for r in report.results}
    assert verdicts == expected


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
