"""Parsing of ``get-model`` output into concrete input values."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from ..floats import F32, F64, FloatFormat, from_fields, round_to
from ..frontend import ast as A

Value = Union[float, int, bool]
_TOKEN = re.compile(r'\s*(?:(\()|(\))|("(?:[^"]|"")*")|(\|[^|]*\|)|([^\s()|";]+)|(;[^\n]*))')


class ModelParseError(ValueError):
    def __init__(self, message: str, fragment: str = ""):
        self.fragment = fragment
        super().__init__(f"{message}: {fragment[:200]}" if fragment else message)


def parse_sexprs(text: str) -> list:
    """All top-level s-expressions in ``text`` (atoms are strings)."""
    stack: list[list] = [[]]
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ModelParseError("unexpected character", text[pos:])
        pos = m.end()
        if m.group(1):
            stack.append([])
        elif m.group(2):
            if len(stack) == 1:
                raise ModelParseError("unbalanced ')'", text[max(0, pos - 40):pos])
            done = stack.pop()
            stack[-1].append(done)
        elif m.group(3) or m.group(5):
            stack[-1].append(m.group(3) or m.group(5))
        elif m.group(4):
            stack[-1].append(m.group(4)[1:-1])
    if len(stack) != 1:
        raise ModelParseError("unbalanced '('", text[-80:])
    return stack[0]


def _render(s) -> str:
    return s if isinstance(s, str) else "(" + " ".join(_render(x) for x in s) + ")"


def bv_value(atom: str) -> tuple[int, int]:
    """(unsigned value, width) of a bit-vector literal."""
    if atom.startswith("#b"):
        return int(atom[2:], 2), len(atom) - 2
    if atom.startswith("#x"):
        return int(atom[2:], 16), 4 * (len(atom) - 2)
    raise ModelParseError("not a bit-vector literal", atom)


def signed(value: int, width: int) -> int:
    return value - (1 << width) if value >> (width - 1) else value


def _fmt(e: int, s: int) -> FloatFormat:
    for fmt in (F64, F32):
        if fmt.ebits == e and fmt.sbits == s:
            return fmt
    raise ModelParseError(f"unsupported floating-point format ({e}, {s})")


def decode(term) -> Value:
    """Decode a literal term: floats, bit-vectors (unsigned here) and booleans."""
    if isinstance(term, str):
        if term in ("true", "false"):
            return term == "true"
        if term.startswith("#"):
            return bv_value(term)[0]
        raise ModelParseError("unrecognised literal", term)
    if len(term) == 4 and term[0] == "fp":
        (sb, _), (eb, ew), (mb, mw) = (bv_value(t) for t in term[1:])
        fmt = _fmt(ew, mw + 1)
        return from_fields(sb, eb, mb, fmt)
    if len(term) == 4 and term[0] == "_" and term[1] in ("NaN", "+oo", "-oo", "+zero", "-zero"):
        _fmt(int(term[2]), int(term[3]))
        return {"NaN": math.nan, "+oo": math.inf, "-oo": -math.inf,
                "+zero": 0.0, "-zero": -0.0}[term[1]]
    if len(term) == 3 and term[0] == "_" and term[1].startswith("bv"):
        return int(term[1][2:]) % (1 << int(term[2]))
    raise ModelParseError("unrecognised literal", _render(term))


@dataclass
class Model:
    """Values of zero-arity symbols.  Function interpretations are kept as text."""
    values: dict[str, Value] = field(default_factory=dict)
    widths: dict[str, int] = field(default_factory=dict)
    functions: dict[str, str] = field(default_factory=dict)
    text: str = ""
    filled: list[str] = field(default_factory=list)  # inputs given default values

    def get(self, symbol: str, ty: A.Type) -> Optional[Value]:
        if symbol not in self.values:
            return None
        v = self.values[symbol]
        if isinstance(ty, A.TypeVar):
            return v if isinstance(v, str) else repr(v)
        if isinstance(v, str):
            raise ModelParseError(f"value of {symbol} is not a literal", v)
        if isinstance(ty, A.IntType):
            return signed(v, ty.bits)
        if isinstance(ty, A.FloatType):
            return round_to(v, ty.fmt)
        return v


def _sort_width(sort) -> Optional[int]:
    if isinstance(sort, list) and len(sort) == 3 and sort[:2] == ["_", "BitVec"]:
        return int(sort[2])
    return None


def parse_model(text: str) -> Model:
    """Parse the response to ``(get-model)``."""
    exprs = parse_sexprs(text)
    if exprs and exprs[0] in ("sat", "unsat", "unknown"):
        exprs = exprs[1:]
    if len(exprs) != 1 or not isinstance(exprs[0], list):
        raise ModelParseError("expected a single model s-expression", text)
    body = exprs[0]
    if body and body[0] == "model":
        body = body[1:]
    model = Model(text=text)
    for entry in body:
        if not isinstance(entry, list) or not entry or entry[0] != "define-fun":
            if isinstance(entry, list) and entry and entry[0] in ("declare-fun", "declare-sort",
                                                                  "forall", "define-sort"):
                continue
            raise ModelParseError("unexpected model entry", _render(entry))
        try:
            _, name, params, sort, value = entry
        except ValueError:
            raise ModelParseError("malformed define-fun", _render(entry)) from None
        if params:
            model.functions[name] = _render(entry)
            continue
        try:
            model.values[name] = decode(value)
        except ModelParseError:
            # elements of abstract sorts have no literal form; keep the solver's name
            model.values[name] = _render(value)
            continue
        w = _sort_width(sort)
        if w is not None:
            model.widths[name] = w
    return model


def default_value(ty: A.Type) -> Value:
    if isinstance(ty, A.FloatType):
        return 0.0
    if isinstance(ty, A.IntType):
        return 0
    if isinstance(ty, A.BoolType):
        return False
    return f"{ty}!default"


def complete(model: Model, inputs: Iterable) -> list[str]:
    """Give every input symbol the solver left out a default value.

    Solvers may omit symbols that do not influence satisfiability; any value
    is then a witness.  Returns the names that were filled in.
    """
    filled = []
    for inp in inputs:
        if inp.symbol not in model.values:
            v = default_value(inp.ty)
            model.values[inp.symbol] = v
            if isinstance(inp.ty, A.IntType):
                model.widths[inp.symbol] = inp.ty.bits
            model.filled.append(inp.name)
            filled.append(inp.name)
    return filled


def bind_inputs(model: Model, inputs: Iterable) -> dict[str, Value]:
    """Concrete argument values keyed by parameter name; KeyError names a missing symbol."""
    out = {}
    for inp in inputs:
        v = model.get(inp.symbol, inp.ty)
        if v is None:
            raise KeyError(inp.symbol)
        out[inp.name] = v
    return out
