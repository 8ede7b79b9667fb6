import math
import random
import struct

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fpverify.floats import to_f32
from fpverify.frontend import ast as A, load
from fpverify.interp import ContractViolation, RuntimeFailure, evaluate
from fpverify.interp.values import float_to_int
from conftest import fixture_program

NAN = math.nan


def jvm_cast(x: float, bits: int) -> int:
    """Independent reference: truncate, clamp to int32/int64, then wrap to narrow widths."""
    if x != x:
        return 0
    wide = 64 if bits == 64 else 32
    lo, hi = -(1 << (wide - 1)), (1 << (wide - 1)) - 1
    if x == math.inf or x >= hi + 1:
        n = hi
    elif x == -math.inf or x <= lo:
        n = lo
    else:
        n = int(x)  # int() truncates toward zero
    if bits < wide:
        n &= (1 << bits) - 1
        if n >= 1 << (bits - 1):
            n -= 1 << bits
    return n


INT = {8: A.INT8, 16: A.INT16, 32: A.INT32, 64: A.INT64}


def test_stormday_paper_value():
    out = evaluate(fixture_program("stormday"), "accuracyPercent", [1073741832, 730144766])
    assert out == to_f32(-2.9586256e-05)
    assert struct.pack(">f", out) == struct.pack(">f", np.float32(-2.9586256e-05))


def test_stormday_fixed_in_range_at_same_model():
    out = evaluate(fixture_program("stormday_fixed"), "accuracyPercent", [1073741832, 730144766])
    assert 0.0 <= out <= 100.0


def test_gradient_nan():
    assert math.isnan(evaluate(fixture_program("gradient"), "gradient", [1.7e308, 0.0]))


@pytest.mark.parametrize("x,bits,expected", [
    (NAN, 32, 0), (1e10, 32, 2147483647), (-1e10, 32, -2147483648), (to_f32(300.7), 8, 44),
    (NAN, 64, 0), (1e30, 64, 2 ** 63 - 1), (-0.9, 32, 0), (70000.5, 16, 4464), (math.inf, 8, -1),
])
def test_cast_table(x, bits, expected):
    assert float_to_int(x, INT[bits]) == expected


@pytest.mark.parametrize("bits", [8, 16, 32, 64])
@pytest.mark.parametrize("single", [False, True])
def test_cast_random_against_reference(bits, single):
    rng = random.Random(bits * 2 + single)
    for _ in range(2000):
        x = struct.unpack(">d", rng.getrandbits(64).to_bytes(8, "big"))[0]
        if rng.random() < 0.5:
            x = rng.uniform(-3e9, 3e9)
        if single:
            x = to_f32(x)
        assert float_to_int(x, INT[bits]) == jvm_cast(x, bits)


def test_modulo_rewrite_evaluates_to_one():
    prog = load("def f(x: Double, n: Double): Double = { x - n * floor(x / n) }")
    assert evaluate(prog, "f", [14.5, 1.5]) == 1.0


@given(st.floats(), st.sampled_from(["<", "<=", ">", ">=", "=="]))
def test_nan_comparisons_false(x, op):
    prog = load(f"def f(x: Double): Boolean = {{ Double.NaN {op} x }}")
    assert evaluate(prog, "f", [x]) is False


def test_signed_zero():
    prog = load("def f(): (Boolean, Boolean, Boolean) = { (0.0 == -0.0, 0.0.isPositiveSign, (-0.0).isPositiveSign) }")
    assert evaluate(prog, "f", []) == (True, True, False)


def test_min_max_signed_zero():
    prog = load("def f(a: Double, b: Double): (Double, Double) = { (min(a, b), max(a, b)) }")
    lo, hi = evaluate(prog, "f", [0.0, -0.0])
    assert math.copysign(1, lo) < 0 and math.copysign(1, hi) > 0


def test_int_division_by_zero():
    with pytest.raises(RuntimeFailure):
        evaluate(load("def f(a: Int, b: Int): Int = { a / b }"), "f", [1, 0])
    assert evaluate(load("def f(a: Int, b: Int): Int = { a / b }"), "f", [-7, 2]) == -3
    assert evaluate(load("def f(a: Int, b: Int): Int = { a % b }"), "f", [-7, 2]) == -1


def test_contract_violation_reported():
    prog = load("def f(x: Double): Double = { require(x > 0.0)\n x }")
    with pytest.raises(ContractViolation) as info:
        evaluate(prog, "f", [-1.0], check_contracts=True)
    assert info.value.clause == "precondition"
    assert evaluate(prog, "f", [-1.0]) == -1.0


def test_depth_limit():
    prog = load("def f(n: Int): Int = { if (n <= 0) 0 else f(n - 1) }.ensuring(r => r == 0)")
    assert evaluate(prog, "f", [5000]) == 0
    with pytest.raises(RuntimeFailure):
        evaluate(prog, "f", [100], max_depth=50)


def test_tuples_and_math():
    prog = load("def f(x: Double): (Double, Float) = { (math.sin(x), sqrt(x.toFloat)) }")
    s, r = evaluate(prog, "f", [0.5])
    assert s == math.sin(0.5) and r == to_f32(math.sqrt(to_f32(0.5)))


def test_bits_round_trip():
    prog = load("def f(x: Double): Double = { Double.fromBits(x.toBits) }")
    assert evaluate(prog, "f", [-2.5]) == -2.5
