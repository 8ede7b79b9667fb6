"""Pretty-printer whose output re-parses to an equal program."""
from __future__ import annotations

import math

from ..floats import F32, hex_repr, shortest_repr
from . import ast as A

_PREFIX = {"neg": "-", "not": "!"}
_CAST_METHOD = {str(t): m for m, t in {
    "toByte": A.INT8, "toShort": A.INT16, "toInt": A.INT32, "toLong": A.INT64,
    "toFloat": A.FLOAT32, "toDouble": A.FLOAT64,
}.items()}


def print_type(ty: A.Type) -> str:
    return str(ty)


def print_literal(lit: A.Literal) -> str:
    v, ty = lit.value, lit.ty
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(ty, A.IntType):
        if ty.bits == 64:
            return f"{v}L"
        if ty.bits == 32:
            return str(v)
        if v in (ty.min, ty.max):
            return f"{ty}.{'MinValue' if v == ty.min else 'MaxValue'}"
        return f"({v}).to{ty}"
    fmt = ty.fmt
    owner = "Float" if fmt is F32 else "Double"
    if math.isnan(v):
        return f"{owner}.NaN"
    if math.isinf(v):
        return f"{owner}.{'PositiveInfinity' if v > 0 else 'NegativeInfinity'}"
    text = shortest_repr(v, fmt)
    if not any(c in text for c in ".eE"):
        text += ".0"
    return text + ("f" if fmt is F32 else "")


def print_expr(e: A.Expr, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(e, A.Literal):
        text = print_literal(e)
        if isinstance(e.ty, A.IntType) and e.ty.bits < 32:
            return text
        return f"({text})" if text.startswith("-") else text
    if isinstance(e, A.Var):
        return e.name
    if isinstance(e, (A.Let, A.Assert)):
        lines = []
        node = e
        while isinstance(node, (A.Let, A.Assert)):
            if isinstance(node, A.Let):
                lines.append(f"{pad}  val {node.name} = {print_expr(node.value, indent + 1)}")
                node = node.body
            else:
                lines.append(f"{pad}  assert({print_expr(node.cond, indent + 1)})")
                node = node.body
        lines.append(f"{pad}  {print_expr(node, indent + 1)}")
        return "{\n" + "\n".join(lines) + f"\n{pad}}}"
    if isinstance(e, A.If):
        return (f"(if ({print_expr(e.cond, indent)}) {print_expr(e.then, indent)} "
                f"else {print_expr(e.orelse, indent)})")
    if isinstance(e, A.Unary):
        inner = print_expr(e.operand, indent)
        if e.op in _PREFIX:
            return f"({_PREFIX[e.op]}({inner}))"
        if e.op in ("abs", "sqrt", "ceil", "floor", "rint"):
            return f"{e.op}({inner})"
        return f"{_wrap(inner)}.{e.op}"
    if isinstance(e, A.Binary):
        lhs, rhs = print_expr(e.lhs, indent), print_expr(e.rhs, indent)
        if e.op in ("min", "max"):
            return f"{e.op}({lhs}, {rhs})"
        return f"({lhs} {e.op} {rhs})"
    if isinstance(e, A.Cast):
        return f"{_wrap(print_expr(e.operand, indent))}.{_CAST_METHOD[str(e.target)]}"
    if isinstance(e, A.FromBits):
        owner = "Float" if e.target.fmt is F32 else "Double"
        return f"{owner}.fromBits({print_expr(e.operand, indent)})"
    if isinstance(e, A.Call):
        targs = "[" + ", ".join(map(print_type, e.type_args)) + "]" if e.type_args else ""
        call = f"{e.func}{targs}(" + ", ".join(print_expr(a, indent) for a in e.args) + ")"
        return f"{call}._{e.component + 1}" if e.component is not None else call
    if isinstance(e, A.MathCall):
        return f"math.{e.func}(" + ", ".join(print_expr(a, indent) for a in e.args) + ")"
    if isinstance(e, A.TupleExpr):
        return "(" + ", ".join(print_expr(a, indent) for a in e.items) + ")"
    if isinstance(e, A.Proj):
        return f"{_wrap(print_expr(e.tuple, indent))}._{e.index}"
    if isinstance(e, A.Checked):
        return print_expr(e.node, indent)
    raise TypeError(f"cannot print {type(e).__name__}")


def _wrap(text: str) -> str:
    if text.startswith("(") and text.endswith(")") or text.replace("_", "").isalnum():
        return text
    if text.startswith("{"):
        return text
    return f"({text})"


def print_function(fn: A.FunctionDef) -> str:
    ann = "".join(f"@{a}\n" for a, on in (("opaque", fn.opaque), ("unchecked", fn.unchecked)) if on)
    tps = ""
    if fn.type_params:
        tps = "[" + ", ".join(f"{t.name} @noeq" if t.noeq else t.name for t in fn.type_params) + "]"
    params = ", ".join(f"{n}: {print_type(t)}" for n, t in fn.params)
    res = f": {print_type(fn.result)}" if fn.result is not None else ""
    lines = [f"{ann}def {fn.name}{tps}({params}){res} = {{"]
    if fn.precondition is not None:
        lines.append(f"  require({print_expr(fn.precondition, 1)})")
    lines.append(f"  {print_expr(fn.body, 1)}")
    head = "\n".join(lines) + "\n}"
    if fn.postcondition is not None:
        head += f".ensuring({fn.postcondition.param} => {print_expr(fn.postcondition.body, 1)})"
    return head


def print_program(program: A.Program) -> str:
    return "\n\n".join(print_function(f) for f in program.functions) + ("\n" if program.functions else "")


def describe_value(value, ty: A.Type) -> str:
    """Human rendering used in reports: decimal plus hex for floats."""
    if isinstance(ty, A.FloatType):
        return f"{shortest_repr(value, ty.fmt)} ({hex_repr(value)})"
    if isinstance(value, tuple) and isinstance(ty, A.TupleType):
        return "(" + ", ".join(describe_value(v, t) for v, t in zip(value, ty.items)) + ")"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)
