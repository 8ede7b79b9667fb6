"""SMT-LIB text helpers and the script container."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..floats import F32, FloatFormat, fields
from ..frontend import ast as A

CHECK_SAT = "(check-sat)"
GET_MODEL = "(get-model)"


@dataclass(frozen=True)
class InputSymbol:
    """A function parameter as it appears in a script."""
    name: str
    symbol: str
    ty: A.Type


@dataclass(frozen=True)
class SmtScript:
    logic: str
    declarations: tuple[str, ...]
    assertions: tuple[str, ...]
    commands: tuple[str, ...] = (CHECK_SAT, GET_MODEL)
    inputs: tuple[InputSymbol, ...] = ()
    header: str = ""

    def text(self) -> str:
        lines = []
        if self.header:
            lines.extend("; " + h for h in self.header.splitlines())
        lines.append("(set-option :produce-models true)")
        lines.append(f"(set-logic {self.logic})")
        lines.extend(self.declarations)
        lines.extend(self.assertions)
        lines.extend(self.commands)
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        return self.text()


def fp_sort(fmt: FloatFormat) -> str:
    return f"(_ FloatingPoint {fmt.ebits} {fmt.sbits})"


def sort_of(ty: A.Type) -> str:
    if isinstance(ty, A.FloatType):
        return fp_sort(ty.fmt)
    if isinstance(ty, A.IntType):
        return f"(_ BitVec {ty.bits})"
    if isinstance(ty, A.BoolType):
        return "Bool"
    if isinstance(ty, A.TypeVar):
        return sort_name(ty)
    raise TypeError(f"no SMT sort for {ty}")


def sort_name(tv: A.TypeVar) -> str:
    return f"T.{tv.name}"


def fp_literal(x: float, fmt: FloatFormat) -> str:
    e, s = fmt.ebits, fmt.sbits
    if math.isnan(x):
        return f"(_ NaN {e} {s})"
    if math.isinf(x):
        return f"(_ {'+' if x > 0 else '-'}oo {e} {s})"
    if x == 0.0:
        return f"(_ {'-' if math.copysign(1.0, x) < 0 else '+'}zero {e} {s})"
    sign, exp, sig = fields(x, fmt)
    return f"(fp #b{sign} #b{exp:0{e}b} #b{sig:0{s - 1}b})"


def bv_literal(n: int, bits: int) -> str:
    n &= (1 << bits) - 1
    return f"#x{n:0{bits // 4}x}" if bits % 4 == 0 else f"#b{n:0{bits}b}"


def literal(value, ty: A.Type) -> str:
    if isinstance(ty, A.BoolType):
        return "true" if value else "false"
    if isinstance(ty, A.IntType):
        return bv_literal(value, ty.bits)
    return fp_literal(value, ty.fmt)


def fmt_suffix(fmt: FloatFormat) -> str:
    return "32" if fmt is F32 else "64"


def is_atom(term: str) -> bool:
    return not term.startswith("(") or term.startswith("(_ ") or term.startswith("(fp #")
