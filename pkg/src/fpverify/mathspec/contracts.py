"""Math-library contracts loaded from ``catalogue.json``.

A contract is a list of clauses, each an FPL predicate over the call's
arguments and its result ``r``.  vcgen encodes the same predicates as SMT
axioms and the fuzzer evaluates them on host results.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Optional

import mpmath

from ..floats import F32, F64, FloatFormat, next_down, next_up, round_fraction
from ..frontend import ast as A
from ..frontend.parser import parse_expr
from ..frontend.printer import print_literal
from ..frontend.typecheck import typecheck_expr


class UnknownFunction(KeyError):
    pass


@dataclass(frozen=True)
class Clause:
    name: str
    kind: str  # nan | special | range | sign | identity
    source: str
    expr: A.Expr
    enabled: bool = True
    note: str = ""


@dataclass(frozen=True)
class SpecialRow:
    args: tuple[str, ...]
    result: str


@dataclass(frozen=True)
class MathContract:
    function: str
    params: tuple[str, ...]
    precision: FloatFormat
    properties: str  # summary of which properties are axiomatised
    nan_characterization: Optional[Clause]
    special_values: tuple[SpecialRow, ...]
    special_clauses: tuple[Clause, ...]
    clauses: tuple[Clause, ...]

    @property
    def arity(self) -> int:
        return len(self.params)

    @property
    def range(self) -> Optional[Clause]:
        return next((c for c in self.clauses if c.kind == "range"), None)

    def axioms(self, include_disabled: bool = False) -> list[Clause]:
        """Every clause the verifier may assume, in catalogue order."""
        out = [self.nan_characterization] if self.nan_characterization else []
        out += list(self.special_clauses)
        out += [c for c in self.clauses if c.enabled or include_disabled]
        return out


def catalogue() -> dict:
    return _catalogue()


@lru_cache(maxsize=1)
def _catalogue() -> dict:
    text = resources.files(__package__).joinpath("catalogue.json").read_text(encoding="utf-8")
    return json.loads(text)


FUNCTIONS = tuple(_catalogue()["functions"])


# ------------------------------------------------------------- constants

def _to_fraction(v: mpmath.mpf) -> Fraction:
    v = mpmath.mpf(v)
    man, exp = v.man_exp  # magnitude only; the sign is kept separately
    q = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -q if v < 0 else q


def nearest(v, fmt: FloatFormat) -> float:
    """Correctly rounded value of the real ``v`` (an mpmath number)."""
    return round_fraction(_to_fraction(v), fmt)


@lru_cache(maxsize=None)
def constants(fmt: FloatFormat) -> dict[str, float]:
    with mpmath.workprec(256):
        return _constants(fmt)


def _constants(fmt: FloatFormat) -> dict[str, float]:
    pi = +mpmath.pi
    max_finite = mpmath.mpf(fmt.max_finite)
    min_sub = mpmath.mpf(fmt.min_subnormal)
    above_m1 = mpmath.mpf(next_up(-1.0, fmt))
    near = {
        "PI": pi, "PI_2": pi / 2, "PI_4": pi / 4, "3PI_4": 3 * pi / 4,
    }
    out = {k: nearest(v, fmt) for k, v in near.items()}
    up = lambda v: next_up(nearest(v, fmt), fmt)
    down = lambda v: next_down(nearest(v, fmt), fmt)
    out.update({
        "PI_UP": up(pi), "PI_2_UP": up(pi / 2),
        "LOG_MIN_DN": down(mpmath.log(min_sub)), "LOG_MAX_UP": up(mpmath.log(max_finite)),
        "LOG1P_MIN_DN": down(mpmath.log1p(above_m1)), "LOG1P_MAX_UP": up(mpmath.log1p(max_finite)),
        "LOG10_MIN_DN": down(mpmath.log10(min_sub)), "LOG10_MAX_UP": up(mpmath.log10(max_finite)),
        "TAN_BOUND": 2.0 ** 64,
    })
    return out


def token_value(token: str, fmt: FloatFormat) -> float:
    """Numeric value of a special-value token such as ``-PI_2`` or ``+inf``."""
    sign = -1.0 if token.startswith("-") else 1.0
    body = token.lstrip("+-")
    if body == "NaN":
        return float("nan")
    if body == "inf":
        return sign * float("inf")
    if body == "0":
        return sign * 0.0
    if body == "1":
        return sign * 1.0
    return sign * constants(fmt)[body]


def _literal(value: float, fmt: FloatFormat) -> str:
    text = print_literal(A.Literal(value, A.float_type(fmt)))
    return f"({text})" if text.startswith("-") else text


def _matches(var: str, token: str, fmt: FloatFormat) -> str:
    body = token.lstrip("+-")
    if body == "NaN":
        return f"{var}.isNaN"
    if body == "0":
        sign = "" if not token.startswith("-") else "!"
        return f"({var} == {_literal(0.0, fmt)} && {sign}{var}.isPositiveSign)"
    return f"{var} == {_literal(token_value(token, fmt), fmt)}"


def _substitute(text: str, fmt: FloatFormat) -> str:
    for name, value in sorted(constants(fmt).items(), key=lambda kv: -len(kv[0])):
        text = text.replace("{" + name + "}", _literal(value, fmt))
    return text


def _clause(name: str, kind: str, source: str, env: dict[str, A.Type], fmt: FloatFormat,
            enabled: bool = True, note: str = "") -> Clause:
    expr = typecheck_expr(parse_expr(source, default_float=fmt), env)
    if expr.ty != A.BOOL:
        raise ValueError(f"clause {name} is not a predicate: {source}")
    return Clause(name, kind, source, expr, enabled, note)


def row_predicate(params, row: SpecialRow, fmt: FloatFormat) -> str:
    cond = " && ".join(_matches(p, t, fmt) for p, t in zip(params, row.args))
    return f"!({cond}) || {_matches('r', row.result, fmt)}"


@lru_cache(maxsize=None)
def contract_for(function: str, precision: FloatFormat = F64) -> MathContract:
    """Contract of a math-library function at the given precision."""
    entry = _catalogue()["functions"].get(function)
    if entry is None:
        raise UnknownFunction(function)
    fmt = precision
    ty = A.float_type(fmt)
    params = tuple(entry["params"])
    env = {p: ty for p in params}
    env["r"] = ty
    nan = None
    if entry["nan"]:
        nan = _clause("nan", "nan", f"r.isNaN == ({entry['nan']})", env, fmt)
    rows = tuple(SpecialRow(tuple(r[:-1]), r[-1]) for r in entry["special"])
    special = tuple(
        _clause(f"f({', '.join(row.args)})", "special", row_predicate(params, row, fmt), env, fmt)
        for row in rows)
    clauses = tuple(
        _clause(c["name"], c["kind"], _substitute(c["predicate"], fmt), env, fmt,
                c.get("enabled", True), c.get("note", ""))
        for c in entry["clauses"])
    return MathContract(function, params, fmt, entry["properties"], nan, rows, special, clauses)


def all_contracts(precision: FloatFormat = F64) -> list[MathContract]:
    return [contract_for(f, precision) for f in FUNCTIONS]


__all__ = ["Clause", "SpecialRow", "MathContract", "UnknownFunction", "contract_for",
           "all_contracts", "constants", "token_value", "FUNCTIONS", "F32", "F64"]
