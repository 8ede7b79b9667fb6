import pytest
from hypothesis import given, settings, strategies as st

from fpverify.frontend import ParseError, TypeCheckError, load, parse, print_program, typecheck
from fpverify.frontend import ast as A
from conftest import FIXTURES, fixture_source
from progen import random_program


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.fpl")), ids=lambda p: p.stem)
def test_fixture_round_trip(path):
    prog = parse(path.read_text())
    again = parse(print_program(prog))
    assert again == prog
    typecheck(prog)


def test_stormday_shape():
    prog = parse(fixture_source("stormday"))
    (fn,) = prog.functions
    assert fn.precondition is not None and fn.postcondition is not None


def test_empty_file():
    assert parse("").functions == ()


def test_parse_error_at_end_of_input():
    src = "def f(x: Double) = x +"
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.span.line == 1 and info.value.span.col == len(src) + 1
    assert info.value.expected


def test_modulo_rejected_with_hint():
    with pytest.raises(TypeCheckError) as info:
        load("def f(): Double = { 14.5 % 1.5 }")
    (d,) = info.value.diagnostics
    assert d.kind == "fp-modulo-unsupported"
    assert "x - n * floor(x / n)" in d.hint and "round" in d.hint


def test_integer_modulo_allowed():
    load("def f(a: Int, b: Int): Int = { a % b }")


PICK = "def pick[T{ann}](a: T, b: T): T = {{ if (a == b) a else b }}\n" \
       "def use(x: Double): Double = {{ pick[Double](x, x) }}"


def test_noeq_violation():
    with pytest.raises(TypeCheckError) as info:
        load(PICK.format(ann=""))
    assert "noeq-violation" in info.value.kinds


def test_noeq_annotation_accepted():
    load(PICK.format(ann=" @noeq"))


def test_recursion_needs_contract():
    with pytest.raises(TypeCheckError) as info:
        load("def f(n: Int): Int = { if (n <= 0) 0 else f(n - 1) }")
    assert "missing-contract" in info.value.kinds
    load("def f(n: Int): Int = { if (n <= 0) 0 else f(n - 1) }.ensuring(r => r == 0)")


def test_unknown_identifier_and_mismatch():
    with pytest.raises(TypeCheckError) as info:
        load("def f(x: Double): Boolean = { y + 1.0 }")
    assert "unknown-identifier" in info.value.kinds
    with pytest.raises(TypeCheckError) as info:
        load("def f(x: Double): Boolean = { x }")
    assert "type-mismatch" in info.value.kinds


def test_diagnostics_deterministic():
    src = "def f(x: Double): Int = { x % 2.0 }\ndef g(): Int = { z }"
    msgs = []
    for _ in range(2):
        with pytest.raises(TypeCheckError) as info:
            load(src)
        msgs.append(str(info.value))
    assert msgs[0] == msgs[1]


def test_every_node_typed():
    prog = load(fixture_source("limit"))
    for fn in prog.functions:
        for node in A.function_exprs(fn):
            assert node.ty is not None


def test_hex_float_literal():
    prog = load("def f(): Double = { 0x1.8p1 }")
    assert prog.functions[0].body.value == 3.0


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_random_programs_round_trip(seed):
    prog = parse(random_program(seed))
    assert parse(print_program(prog)) == prog
    typed = typecheck(prog)
    for fn in typed.functions:
        for node in A.function_exprs(fn):
            assert not (isinstance(node, A.Binary) and node.op == "%" and isinstance(node.ty, A.FloatType))
