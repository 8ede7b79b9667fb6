"""Primitive operations on concrete values.

Floats are Python floats (Float32 values are kept exactly representable in
binary32 by rounding after every operation), integers are Python ints kept
inside their width, booleans are bools and tuples are tuples.
"""
from __future__ import annotations

import math

from ..floats import F32, F64, FloatFormat, from_bits, round_int, to_bits, to_f32
from ..frontend import ast as A


class RuntimeFailure(Exception):
    """Evaluation cannot continue (integer division by zero, depth limit, ...)."""


class DivisionByZero(RuntimeFailure):
    pass


def fround(x: float, fmt: FloatFormat) -> float:
    return to_f32(x) if fmt is F32 else x


# ----------------------------------------------------------------- floats

def fdiv(a: float, b: float) -> float:
    if b == 0.0:
        if a == 0.0 or math.isnan(a) or math.isnan(b):
            return math.nan
        return math.copysign(math.inf, a) * math.copysign(1.0, b)
    return a / b


def fsqrt(x: float) -> float:
    if math.isnan(x) or x < 0:
        return math.nan
    return math.sqrt(x)


def _integral(x: float, fn) -> float:
    if not math.isfinite(x) or x == 0.0:
        return x
    return math.copysign(float(fn(x)), x)


def fceil(x: float) -> float:
    return _integral(x, math.ceil)


def ffloor(x: float) -> float:
    return _integral(x, math.floor)


def frint(x: float) -> float:
    return _integral(x, round)  # round() on floats is ties-to-even


def fmin(a: float, b: float) -> float:
    # NaN-ignoring (IEEE minNum, as SMT-LIB fp.min); -0 orders below +0
    if math.isnan(a):
        return b
    if math.isnan(b):
        return a
    if a == 0.0 and b == 0.0:
        return a if math.copysign(1.0, a) < 0 else b
    return a if a < b else b


def fmax(a: float, b: float) -> float:
    if math.isnan(a):
        return b
    if math.isnan(b):
        return a
    if a == 0.0 and b == 0.0:
        return a if math.copysign(1.0, a) > 0 else b
    return a if a > b else b


def is_positive_sign(x: float) -> bool:
    # matches fp.isPositive: false for NaN
    return not math.isnan(x) and math.copysign(1.0, x) > 0


def float_to_bits(x: float, fmt: FloatFormat) -> int:
    return A.IntType(fmt.width).wrap(to_bits(x, fmt))


def bits_to_float(n: int, fmt: FloatFormat) -> float:
    return from_bits(n & ((1 << fmt.width) - 1), fmt)


# ---------------------------------------------------------------- integers

def idiv(a: int, b: int, ty: A.IntType) -> int:
    if b == 0:
        raise DivisionByZero("integer division by zero")
    q = abs(a) // abs(b)
    return ty.wrap(q if (a < 0) == (b < 0) else -q)


def irem(a: int, b: int, ty: A.IntType) -> int:
    if b == 0:
        raise DivisionByZero("integer remainder by zero")
    r = abs(a) % abs(b)
    return ty.wrap(r if a >= 0 else -r)


# ------------------------------------------------------------------- casts

def float_to_int(x: float, ty: A.IntType) -> int:
    """JVM narrowing: NaN to 0, truncate toward zero, clamp to Int/Long, then
    keep the low bits for Byte/Short."""
    wide = ty if ty.bits >= 32 else A.INT32
    if math.isnan(x):
        n = 0
    elif math.isinf(x):
        n = wide.max if x > 0 else wide.min
    else:
        n = max(wide.min, min(wide.max, math.trunc(x)))
    return ty.wrap(n)


def cast(value, src: A.Type, dst: A.Type):
    if src == dst:
        return value
    if isinstance(dst, A.FloatType):
        if isinstance(src, A.IntType):
            return round_int(value, dst.fmt)
        return fround(value, dst.fmt)
    if isinstance(src, A.FloatType):
        return float_to_int(value, dst)
    return dst.wrap(value)


def default_value(ty: A.Type):
    if isinstance(ty, A.FloatType):
        return 0.0
    if isinstance(ty, A.IntType):
        return 0
    if isinstance(ty, A.BoolType):
        return False
    if isinstance(ty, A.TupleType):
        return tuple(default_value(t) for t in ty.items)
    return "T!val!0"


def fmt_of(ty: A.Type) -> FloatFormat:
    return ty.fmt if isinstance(ty, A.FloatType) else F64
