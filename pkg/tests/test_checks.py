import pytest
from hypothesis import given, settings, strategies as st

from fpverify.checks import CheckConfig, count_obligations, inject_checks, is_float_comparison, \
    is_float_to_int_cast, strip_checks
from fpverify.frontend import load
from fpverify.frontend import ast as A
from fpverify.interp import RuntimeFailure, evaluate
from conftest import fixture_program
from progen import random_program


def _checked(prog):
    return [n for fn in prog.functions for n in A.walk(fn.body) if isinstance(n, A.Checked)]


def test_limit_gets_one_nan_check():
    (c,) = _checked(inject_checks(fixture_program("limit")))
    assert c.kinds == ("nanCheck",)
    assert c.node.op == ">"


def test_cast_gets_two_obligations():
    prog = inject_checks(load("def f(x: Double): Int = { x.toInt }"))
    (c,) = _checked(prog)
    assert c.kinds == ("castNaN", "castRange")
    assert count_obligations(prog) == {"nanCheck": 0, "castNaN": 1, "castRange": 1}


def test_no_checks_on_predicates_or_int_to_float():
    prog = inject_checks(load(
        "def f(x: Double, i: Int): Boolean = { x.isNaN || min(x, 1.0).isFinite || i.toDouble.isInfinite }"))
    assert _checked(prog) == []


def test_disabled_configuration():
    prog = fixture_program("limit")
    assert _checked(inject_checks(prog, CheckConfig(False, False))) == []


def test_contracts_untouched():
    prog = inject_checks(load("def f(x: Double): Double = { require(x > 0.0)\n x }.ensuring(r => r > 0.0)"))
    fn = prog.functions[0]
    assert not any(isinstance(n, A.Checked) for n in A.walk(fn.precondition))
    assert not any(isinstance(n, A.Checked) for n in A.walk(fn.postcondition.body))


def test_unchecked_annotation_and_suppressions():
    src = "@unchecked\ndef f(x: Double): Boolean = { x < 1.0 }\ndef g(x: Double): Boolean = { x < 1.0 }"
    prog = load(src)
    assert len(_checked(inject_checks(prog))) == 1
    assert _checked(inject_checks(prog, CheckConfig(per_function_suppressions=frozenset({"g"})))) == []
    site = next(n.span for n in A.walk(prog.function("g").body) if is_float_comparison(n))
    assert _checked(inject_checks(prog, CheckConfig(per_site_suppressions=frozenset({site})))) == []


def test_unknown_suppression_rejected():
    prog = fixture_program("limit")
    with pytest.raises(ValueError):
        inject_checks(prog, CheckConfig(per_function_suppressions=frozenset({"nope"})))
    with pytest.raises(ValueError):
        inject_checks(prog, CheckConfig(per_site_suppressions=frozenset({A.Span(99, 1)})))


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_counts_and_idempotence(seed):
    prog = load(random_program(seed))
    once = inject_checks(prog)
    assert inject_checks(once) == once
    cmp = sum(is_float_comparison(n) for fn in prog.functions for n in A.walk(fn.body))
    casts = sum(is_float_to_int_cast(n) for fn in prog.functions for n in A.walk(fn.body))
    counts = count_obligations(once)
    assert counts["nanCheck"] == cmp
    assert counts["castNaN"] + counts["castRange"] == 2 * casts
    assert strip_checks(once.functions[0].body) == prog.functions[0].body


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6),
       st.lists(st.sampled_from([0.0, -0.0, 1.5, -3.0, 1e308, float("nan"), float("inf"), 5e-324]),
                min_size=2, max_size=2),
       st.floats(width=32), st.integers(-2 ** 31, 2 ** 31 - 1), st.integers(-2 ** 31, 2 ** 31 - 1))
def test_injection_preserves_semantics(seed, ab, c, i, j):
    prog = load(random_program(seed))
    env = {"a": ab[0], "b": ab[1], "c": c, "i": i, "j": j}
    args = [env[n] for n, _ in prog.functions[0].params]
    try:
        plain = evaluate(prog, "f", args)
    except RuntimeFailure:
        return
    checked = evaluate(inject_checks(prog), "f", args)
    assert repr(plain) == repr(checked)
