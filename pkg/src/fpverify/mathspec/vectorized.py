"""Evaluate contract predicates over numpy arrays.

Only the fragment used by catalogue clauses is supported: literals,
variables, boolean connectives, comparisons, ``+ - * /``, ``abs``, ``neg``
and the classification predicates.
"""
from __future__ import annotations

import numpy as np

from ..floats import F32
from ..frontend import ast as A


def dtype_for(ty: A.Type):
    return np.float32 if isinstance(ty, A.FloatType) and ty.fmt is F32 else np.float64


def evaluate(expr: A.Expr, env: dict[str, np.ndarray]) -> np.ndarray:
    with np.errstate(all="ignore"):
        return _eval(expr, env)


def _eval(e: A.Expr, env):
    if isinstance(e, A.Literal):
        if isinstance(e.ty, A.FloatType):
            return dtype_for(e.ty)(e.value)
        return e.value
    if isinstance(e, A.Var):
        return env[e.name]
    if isinstance(e, A.Checked):
        return _eval(e.node, env)
    if isinstance(e, A.Unary):
        x = _eval(e.operand, env)
        op = e.op
        if op == "not":
            return np.logical_not(x)
        if op == "neg":
            return np.negative(x)
        if op == "abs":
            return np.abs(x)
        if op == "isNaN":
            return np.isnan(x)
        if op == "isFinite":
            return np.isfinite(x)
        if op == "isInfinite":
            return np.isinf(x)
        if op == "isPositiveSign":
            return ~np.isnan(x) & ~np.signbit(x)
        raise NotImplementedError(f"vectorized {op}")
    if isinstance(e, A.Binary):
        a, b = _eval(e.lhs, env), _eval(e.rhs, env)
        op = e.op
        table = {
            "&&": np.logical_and, "||": np.logical_or,
            "<": np.less, "<=": np.less_equal, ">": np.greater, ">=": np.greater_equal,
            "==": np.equal, "!=": np.not_equal,
            "+": np.add, "-": np.subtract, "*": np.multiply, "/": np.divide,
        }
        if op not in table:
            raise NotImplementedError(f"vectorized {op}")
        return table[op](a, b)
    raise NotImplementedError(f"vectorized {type(e).__name__}")
