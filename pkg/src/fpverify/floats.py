"""Bit-level helpers for IEEE-754 binary32/binary64 values.

Float32 values are carried as Python floats that are exactly representable
in binary32; every helper here keeps that invariant.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class FloatFormat:
    name: str
    ebits: int
    sbits: int  # significand width including the hidden bit

    @property
    def width(self) -> int:
        return self.ebits + self.sbits

    @property
    def bias(self) -> int:
        return (1 << (self.ebits - 1)) - 1

    @property
    def emin(self) -> int:
        return 1 - self.bias

    @property
    def emax(self) -> int:
        return self.bias

    @property
    def max_finite(self) -> float:
        return math.ldexp((1 << self.sbits) - 1, self.emax - self.sbits + 1)

    @property
    def min_normal(self) -> float:
        return math.ldexp(1.0, self.emin)

    @property
    def min_subnormal(self) -> float:
        return math.ldexp(1.0, self.emin - self.sbits + 1)

    @property
    def canonical_nan_bits(self) -> int:
        return ((1 << self.ebits) - 1) << (self.sbits - 1) | 1 << (self.sbits - 2)


F32 = FloatFormat("Float32", 8, 24)
F64 = FloatFormat("Float64", 11, 53)


def round_fraction(q: Fraction, fmt: FloatFormat, negative_zero: bool = False) -> float:
    """Round an exact rational to ``fmt`` with round-nearest-ties-to-even."""
    if q == 0:
        return -0.0 if negative_zero else 0.0
    sign = -1.0 if q < 0 else 1.0
    a = abs(q)
    e = a.numerator.bit_length() - a.denominator.bit_length()
    if Fraction(2) ** e > a:
        e -= 1
    e = max(e, fmt.emin)
    shift = e - fmt.sbits + 1
    m = round(a / Fraction(2) ** shift)  # Fraction.__round__ is ties-to-even
    if m == 0:
        return math.copysign(0.0, sign)
    if m.bit_length() + shift > fmt.emax + 1:
        return sign * math.inf
    value = math.ldexp(m, shift)
    if value > fmt.max_finite:
        return sign * math.inf
    return sign * value


def to_f32(x: float) -> float:
    """Round a binary64 value to binary32 (RNE), returned as a Python float."""
    with np.errstate(all="ignore"):
        return float(np.float32(x))


def round_to(x: float, fmt: FloatFormat) -> float:
    return to_f32(x) if fmt is F32 else float(x)


def round_int(n: int, fmt: FloatFormat) -> float:
    """Correctly rounded integer to float conversion (no double rounding)."""
    if fmt is F64:
        try:
            return float(n)
        except OverflowError:
            return math.copysign(math.inf, n)
    return round_fraction(Fraction(n), fmt)


def is_representable(x: float, fmt: FloatFormat) -> bool:
    if math.isnan(x) or math.isinf(x):
        return True
    return fmt is F64 or to_f32(x) == x


def to_bits(x: float, fmt: FloatFormat) -> int:
    """Raw bit pattern; NaN always maps to the canonical quiet NaN."""
    if math.isnan(x):
        return fmt.canonical_nan_bits
    if fmt is F64:
        return struct.unpack("<Q", struct.pack("<d", x))[0]
    return struct.unpack("<I", struct.pack("<f", x))[0]


def from_bits(bits: int, fmt: FloatFormat) -> float:
    bits &= (1 << fmt.width) - 1
    if fmt is F64:
        x = struct.unpack("<d", struct.pack("<Q", bits))[0]
    else:
        x = struct.unpack("<f", struct.pack("<I", bits))[0]
    return math.nan if math.isnan(x) else x


def from_fields(sign: int, exponent: int, significand: int, fmt: FloatFormat) -> float:
    bits = (sign << (fmt.width - 1)) | (exponent << (fmt.sbits - 1)) | significand
    return from_bits(bits, fmt)


def fields(x: float, fmt: FloatFormat) -> tuple[int, int, int]:
    bits = to_bits(x, fmt)
    frac_bits = fmt.sbits - 1
    return (bits >> (fmt.width - 1), (bits >> frac_bits) & ((1 << fmt.ebits) - 1),
            bits & ((1 << frac_bits) - 1))


def parse_decimal(text: str, fmt: FloatFormat) -> float:
    text = text.replace("_", "")
    q = Fraction(text)
    return round_fraction(q, fmt, negative_zero=text.lstrip().startswith("-"))


def parse_hex(text: str, fmt: FloatFormat) -> float:
    """Parse a C99-style hex float literal (``0x1.8p3``) exactly, then round."""
    s = text.strip().lower()
    neg = s.startswith("-")
    s = s.lstrip("+-")
    if not s.startswith("0x"):
        raise ValueError(f"not a hex float: {text!r}")
    s = s[2:]
    mant, _, exp = s.partition("p")
    whole, _, frac = mant.partition(".")
    digits = (whole or "0") + frac
    q = Fraction(int(digits, 16), 16 ** len(frac)) * Fraction(2) ** int(exp or "0")
    return round_fraction(-q if neg else q, fmt, negative_zero=neg)


def shortest_repr(x: float, fmt: FloatFormat) -> str:
    """Shortest decimal string that round-trips to ``x`` at ``fmt``."""
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if fmt is F64:
        return repr(float(x))
    return np.format_float_scientific(np.float32(x), unique=True, trim="-") \
        if (x != 0 and (abs(x) < 1e-3 or abs(x) >= 1e7)) \
        else np.format_float_positional(np.float32(x), unique=True, trim="0")


def hex_repr(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return float(x).hex()


def next_up(x: float, fmt: FloatFormat) -> float:
    if fmt is F64:
        return math.nextafter(x, math.inf)
    return float(np.nextafter(np.float32(x), np.float32(np.inf)))


def next_down(x: float, fmt: FloatFormat) -> float:
    return -next_up(-x, fmt)


def same_value(a: float, b: float) -> bool:
    """Bitwise identity modulo NaN payload (SMT-LIB ``=`` on floats)."""
    if math.isnan(a) or math.isnan(b):
        return math.isnan(a) and math.isnan(b)
    return a == b and math.copysign(1.0, a) == math.copysign(1.0, b)
