"""Big-step evaluator for typed FPL programs."""
from __future__ import annotations

import math
import sys
import threading
from dataclasses import dataclass, field
from typing import Any, Optional

from ..floats import F32
from ..frontend import ast as A
from ..mathspec.hostmath import call as host_call
from . import values as V
from .values import RuntimeFailure

DEFAULT_MAX_DEPTH = 10 ** 6


class ContractViolation(Exception):
    def __init__(self, function: str, clause: str, span: A.Span = A.NO_SPAN):
        self.function, self.clause, self.span = function, clause, span
        super().__init__(f"{function}: {clause} violated at {span}")


@dataclass
class Monitor:
    """Records the value of one obligation's condition each time the top
    frame reaches the obligation's site."""
    kind: str
    span: A.Span
    observed: list[bool] = field(default_factory=list)


def explode(name: str, value, ty: A.Type, env: dict) -> None:
    """Bind ``name`` and, for tuples, the flattened component names ``name__i``."""
    env[name] = value
    if isinstance(ty, A.TupleType):
        for i, (v, t) in enumerate(zip(value, ty.items), 1):
            explode(f"{name}__{i}", v, t, env)


class Evaluator:
    def __init__(self, program: A.Program, check_contracts: bool = False,
                 max_depth: int = DEFAULT_MAX_DEPTH, monitor: Optional[Monitor] = None):
        self.program = program
        self.fns = {f.name: f for f in program.functions}
        self.check_contracts = check_contracts
        self.max_depth = max_depth
        self.monitor = monitor
        self.depth = 0
        self.stack: list[str] = []

    # ------------------------------------------------------------ calls
    def call(self, name: str, args: tuple) -> Any:
        fn = self.fns.get(name)
        if fn is None:
            raise RuntimeFailure(f"unknown function {name}")
        if self.depth >= self.max_depth:
            raise RuntimeFailure(f"recursion depth limit {self.max_depth} exceeded")
        env: dict[str, Any] = {}
        for (pname, pty), v in zip(fn.params, args):
            explode(pname, v, pty, env)
        self.depth += 1
        self.stack.append(name)
        try:
            if self.check_contracts and fn.precondition is not None and not self.eval(fn.precondition, env):
                raise ContractViolation(name, "precondition", fn.precondition.span)
            result = self.eval(fn.body, env)
            if self.check_contracts and fn.postcondition is not None \
                    and not self.postcondition_holds(fn, env, result):
                raise ContractViolation(name, "postcondition", fn.postcondition.span)
            return result
        finally:
            self.depth -= 1
            self.stack.pop()

    def postcondition_holds(self, fn: A.FunctionDef, env: dict, result) -> bool:
        penv = dict(env)
        explode(fn.postcondition.param, result, fn.result, penv)
        return bool(self.eval(fn.postcondition.body, penv))

    def _watch(self, kind: str, span: A.Span) -> bool:
        m = self.monitor
        return m is not None and self.depth == 1 and m.span == span and m.kind == kind

    # ------------------------------------------------------ expressions
    def eval(self, e: A.Expr, env: dict) -> Any:
        return getattr(self, "_" + type(e).__name__)(e, env)

    def _Literal(self, e, env):
        return e.value

    def _Var(self, e, env):
        try:
            return env[e.name]
        except KeyError:
            raise RuntimeFailure(f"unbound variable {e.name}") from None

    def _Let(self, e, env):
        inner = dict(env)
        explode(e.name, self.eval(e.value, env), e.value.ty, inner)
        return self.eval(e.body, inner)

    def _If(self, e, env):
        return self.eval(e.then if self.eval(e.cond, env) else e.orelse, env)

    def _Assert(self, e, env):
        ok = bool(self.eval(e.cond, env))
        if self._watch("userAssert", e.span):
            self.monitor.observed.append(ok)
        if not ok and self.check_contracts:
            raise ContractViolation(self.stack[-1] if self.stack else "<expr>", "assertion", e.span)
        return self.eval(e.body, env)

    def _Checked(self, e, env):
        node = e.node
        if self.monitor is not None and self.depth == 1 and self.monitor.span == e.span \
                and self.monitor.kind in e.kinds:
            kind = self.monitor.kind
            if kind == "nanCheck":
                lhs, rhs = self.eval(node.lhs, env), self.eval(node.rhs, env)
                ok = not (isinstance(lhs, float) and math.isnan(lhs)) and \
                    not (isinstance(rhs, float) and math.isnan(rhs))
                self.monitor.observed.append(ok)
                return self._compare(node.op, lhs, rhs, node.lhs.ty)
            x = self.eval(node.operand, env)
            if kind == "castNaN":
                ok = not math.isnan(x)
            else:
                t = node.target
                ok = math.isnan(x) or (math.isfinite(x) and t.min <= math.trunc(x) <= t.max)
            self.monitor.observed.append(ok)
            return V.float_to_int(x, node.target)
        return self.eval(node, env)

    def _Unary(self, e, env):
        x = self.eval(e.operand, env)
        op = e.op
        t = e.operand.ty
        if op == "not":
            return not x
        if isinstance(t, A.IntType):
            if op == "neg":
                return t.wrap(-x)
            if op == "abs":
                return t.wrap(abs(x))
            raise RuntimeFailure(f"{op} on integers")
        fmt = t.fmt
        if op == "neg":
            return -x
        if op == "abs":
            return math.fabs(x)
        if op == "sqrt":
            return V.fround(V.fsqrt(x), fmt)
        if op == "ceil":
            return V.fceil(x)
        if op == "floor":
            return V.ffloor(x)
        if op == "rint":
            return V.frint(x)
        if op == "isNaN":
            return math.isnan(x)
        if op == "isFinite":
            return math.isfinite(x)
        if op == "isInfinite":
            return math.isinf(x)
        if op == "isPositiveSign":
            return V.is_positive_sign(x)
        if op == "toBits":
            return V.float_to_bits(x, fmt)
        raise RuntimeFailure(f"unknown unary operator {op}")

    def _compare(self, op: str, a, b, ty: A.Type) -> bool:
        if isinstance(ty, A.TypeVar):
            if ty.noeq:
                raise RuntimeFailure("equality on a @noeq type has no concrete interpretation")
            return (a == b) == (op == "==")
        if op == "==":
            return a == b
        if op == "!=":
            return a != b
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        return a >= b

    def _Binary(self, e, env):
        op = e.op
        if op == "&&":
            return bool(self.eval(e.lhs, env)) and bool(self.eval(e.rhs, env))
        if op == "||":
            return bool(self.eval(e.lhs, env)) or bool(self.eval(e.rhs, env))
        a, b = self.eval(e.lhs, env), self.eval(e.rhs, env)
        t = e.lhs.ty
        if op in A.COMPARE_OPS:
            return self._compare(op, a, b, t)
        if isinstance(t, A.IntType):
            if op in ("/", "%"):
                if self._watch("intDivByZero", e.span):
                    self.monitor.observed.append(b != 0)
                return V.idiv(a, b, t) if op == "/" else V.irem(a, b, t)
            if op == "+":
                return t.wrap(a + b)
            if op == "-":
                return t.wrap(a - b)
            if op == "*":
                return t.wrap(a * b)
            if op == "min":
                return min(a, b)
            if op == "max":
                return max(a, b)
            raise RuntimeFailure(f"unknown integer operator {op}")
        fmt = t.fmt
        if op == "+":
            r = a + b
        elif op == "-":
            r = a - b
        elif op == "*":
            r = a * b
        elif op == "/":
            r = V.fdiv(a, b)
        elif op == "min":
            return V.fmin(a, b)
        elif op == "max":
            return V.fmax(a, b)
        else:
            raise RuntimeFailure(f"unsupported floating-point operator {op}")
        return V.fround(r, fmt)

    def _Cast(self, e, env):
        return V.cast(self.eval(e.operand, env), e.operand.ty, e.target)

    def _FromBits(self, e, env):
        return V.bits_to_float(self.eval(e.operand, env), e.target.fmt)

    def _MathCall(self, e, env):
        args = [self.eval(a, env) for a in e.args]
        return host_call(e.func, e.ty.fmt, *args)

    def _TupleExpr(self, e, env):
        return tuple(self.eval(x, env) for x in e.items)

    def _Proj(self, e, env):
        return self.eval(e.tuple, env)[e.index - 1]

    def _Call(self, e, env):
        args = tuple(self.eval(a, env) for a in e.args)
        if self._watch("callPrecondition", e.span):
            callee = self.fns[e.func]
            if callee.precondition is not None:
                cenv: dict[str, Any] = {}
                for (pname, pty), v in zip(callee.params, args):
                    explode(pname, v, pty, cenv)
                self.monitor.observed.append(bool(self.eval(callee.precondition, cenv)))
        result = self.call(e.func, args)
        if e.component is not None:
            return _component(result, e.component)
        return result


def _component(value, index: int):
    """``index``-th scalar (0-based) of a possibly nested tuple, in declaration order."""
    flat: list = []

    def go(v):
        if isinstance(v, tuple):
            for x in v:
                go(x)
        else:
            flat.append(v)
    go(value)
    return flat[index]


_STACK_BYTES = 1 << 30
# the host interpreter needs a few hundred bytes of C stack per frame
_FRAME_BYTES = 800


def run_deep(thunk, limit: int = _STACK_BYTES // _FRAME_BYTES):
    """Run ``thunk`` on a thread with a large stack so deep FPL recursion
    hits the configured depth limit before the host stack overflows."""
    box: dict[str, Any] = {}

    def target():
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, limit))
        try:
            box["value"] = thunk()
        except BaseException as exc:  # re-raised on the caller's thread
            box["error"] = exc
        finally:
            sys.setrecursionlimit(old)

    old_size = threading.stack_size()
    threading.stack_size(_STACK_BYTES)
    try:
        t = threading.Thread(target=target)
        t.start()
    finally:
        threading.stack_size(old_size)
    t.join()
    if "error" in box:
        err = box["error"]
        if isinstance(err, RecursionError):
            raise RuntimeFailure("host recursion limit reached") from err
        raise err
    return box["value"]


def evaluate(program: A.Program, function: str, args, *, check_contracts: bool = False,
             max_depth: int = DEFAULT_MAX_DEPTH):
    """Evaluate ``function`` on concrete ``args``.

    Preconditions are not assumed. With ``check_contracts`` a failing
    require/ensuring/assert raises :class:`ContractViolation`.
    """
    ev = Evaluator(program, check_contracts=check_contracts, max_depth=max_depth)
    fn = program.function(function)
    if len(args) != len(fn.params):
        raise ValueError(f"{function} expects {len(fn.params)} argument(s), got {len(args)}")
    args = tuple(coerce_arg(a, t) for a, (_, t) in zip(args, fn.params))
    return run_deep(lambda: ev.call(function, args))


def coerce_arg(value, ty: A.Type):
    """Normalise a Python value to the interpreter's representation for ``ty``."""
    if isinstance(ty, A.FloatType):
        v = float(value)
        return V.fround(v, ty.fmt) if ty.fmt is F32 else v
    if isinstance(ty, A.IntType):
        if int(value) != value or not ty.min <= int(value) <= ty.max:
            raise ValueError(f"{value} is not a valid {ty}")
        return int(value)
    if isinstance(ty, A.BoolType):
        return bool(value)
    if isinstance(ty, A.TupleType):
        return tuple(coerce_arg(v, t) for v, t in zip(value, ty.items))
    return value
