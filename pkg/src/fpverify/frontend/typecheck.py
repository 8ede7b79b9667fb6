"""Typechecker: resolves names, assigns a type to every node and enforces
the language restrictions (no floating-point ``%``, ``@noeq`` discipline,
contracts on recursive functions).

Numeric operands follow JVM binary numeric promotion; the promotions are
inserted as explicit implicit-flagged ``Cast`` nodes so later stages never
see mixed-type arithmetic.
"""
from __future__ import annotations

from dataclasses import replace
from typing import Optional

from ..floats import F64, round_int
from . import ast as A
from .ast import Span
from .errors import Diagnostic, TypeCheckError
from .parser import _Ascribed

MODULO_HINT = ("rewrite `x % n` as `x - n * floor(x / n)`; the two agree over the reals "
               "but round differently in floating point")


class _ErrorType(A.Type):
    def __str__(self):
        return "<error>"

    def __eq__(self, other):
        return isinstance(other, _ErrorType)

    def __hash__(self):
        return 0


ERROR = _ErrorType()

_INT_RANK = {8: 0, 16: 1, 32: 2, 64: 3}


def _numeric(t: A.Type) -> bool:
    return isinstance(t, (A.IntType, A.FloatType))


def promote(a: A.Type, b: A.Type) -> A.Type:
    """JVM binary numeric promotion."""
    if a == A.FLOAT64 or b == A.FLOAT64:
        return A.FLOAT64
    if a == A.FLOAT32 or b == A.FLOAT32:
        return A.FLOAT32
    if a == A.INT64 or b == A.INT64:
        return A.INT64
    return A.INT32


def widens_to(src: A.Type, dst: A.Type) -> bool:
    """Scala's implicit numeric widening (weak conformance)."""
    if src == dst:
        return True
    if isinstance(src, A.IntType):
        if isinstance(dst, A.IntType):
            return _INT_RANK[src.bits] <= _INT_RANK[dst.bits]
        return isinstance(dst, A.FloatType)
    if src == A.FLOAT32 and dst == A.FLOAT64:
        return True
    return False


def _contains_float(t: A.Type) -> bool:
    if isinstance(t, A.FloatType):
        return True
    if isinstance(t, A.TupleType):
        return any(_contains_float(x) for x in t.items)
    return False


class TypeChecker:
    def __init__(self, program: A.Program):
        self.program = program
        self.diags: list[Diagnostic] = []
        self.defs: dict[str, A.FunctionDef] = {}
        self.results: dict[str, A.Type] = {}
        self.in_progress: set[str] = set()
        self.typed: dict[str, A.FunctionDef] = {}
        self.current: Optional[A.FunctionDef] = None

    def error(self, kind: str, message: str, span: Span, hint: Optional[str] = None) -> _ErrorType:
        self.diags.append(Diagnostic(kind, message, span, hint))
        return ERROR

    # ----------------------------------------------------------- program
    def run(self) -> A.Program:
        from .parser import BINARY_BUILTINS, UNARY_BUILTINS
        reserved = set(A.MATH_FUNCTIONS) | UNARY_BUILTINS | BINARY_BUILTINS | {"require", "assert", "math"}
        for fn in self.program.functions:
            if fn.name in self.defs:
                self.error("duplicate-definition", f"function {fn.name} is defined twice", fn.span)
                continue
            if fn.name in reserved:
                self.error("duplicate-definition", f"{fn.name} is a builtin and cannot be redefined", fn.span)
                continue
            self.defs[fn.name] = fn
        for fn in self.program.functions:
            if self.defs.get(fn.name) is fn:
                self.check_function(fn)
        self.check_recursion()
        if self.diags:
            raise TypeCheckError(self.diags, self.program.source_name)
        return replace(self.program, functions=tuple(self.typed[f.name] for f in self.program.functions))

    def result_type(self, name: str, span: Span) -> A.Type:
        fn = self.defs[name]
        if fn.result is not None:
            return fn.result
        if name in self.results:
            return self.results[name]
        if name in self.in_progress:
            return self.error("type-mismatch", f"recursive function {name} needs an explicit result type", span)
        saved = self.current
        self.check_function(fn)
        self.current = saved
        return self.results.get(name, ERROR)

    def check_function(self, fn: A.FunctionDef) -> None:
        if fn.name in self.typed:
            return
        self.in_progress.add(fn.name)
        self.current = fn
        env: dict[str, A.Type] = {}
        for pname, pty in fn.params:
            if "__" in pname:
                self.error("unsupported", f"identifier {pname} uses the reserved '__'", fn.span)
            if pname in env:
                self.error("duplicate-definition", f"parameter {pname} declared twice", fn.span)
            env[pname] = pty
        pre = None
        if fn.precondition is not None:
            pre = self.expect(self.expr(fn.precondition, env), A.BOOL, "precondition")
        body = self.expr(fn.body, env)
        result = fn.result
        if result is not None:
            body = self.coerce(body, result, "function body")
        else:
            result = body.ty
        self.results[fn.name] = result
        post = None
        if fn.postcondition is not None:
            lam = fn.postcondition
            penv = dict(env)
            penv[lam.param] = result
            post = A.Lambda(lam.param, self.expect(self.expr(lam.body, penv), A.BOOL, "postcondition"),
                            span=lam.span)
        self.in_progress.discard(fn.name)
        self.typed[fn.name] = replace(fn, result=result, body=body, precondition=pre, postcondition=post)

    def check_recursion(self) -> None:
        graph = {name: {n.func for n in A.function_exprs(fn) if isinstance(n, A.Call) and n.func in self.defs}
                 for name, fn in self.defs.items()}
        for name, fn in self.defs.items():
            if fn.postcondition is not None:
                continue
            # reachable from itself?
            seen, stack = set(), list(graph[name])
            while stack:
                n = stack.pop()
                if n == name:
                    self.error("missing-contract",
                               f"recursive function {name} must declare a postcondition (ensuring)", fn.span)
                    break
                if n not in seen:
                    seen.add(n)
                    stack.extend(graph.get(n, ()))

    # ------------------------------------------------------- conversions
    def coerce(self, e: A.Expr, target: A.Type, what: str) -> A.Expr:
        if e.ty == target or e.ty == ERROR or target == ERROR:
            return e
        if _numeric(e.ty) and _numeric(target) and widens_to(e.ty, target):
            return implicit_cast(e, target)
        if isinstance(e, A.TupleExpr) and isinstance(target, A.TupleType) and len(e.items) == len(target.items):
            items = tuple(self.coerce(x, t, what) for x, t in zip(e.items, target.items))
            return replace(e, items=items, ty=target)
        self.error("type-mismatch", f"{what}: expected {target}, found {e.ty}", e.span)
        return e

    def expect(self, e: A.Expr, target: A.Type, what: str) -> A.Expr:
        if e.ty != target and e.ty != ERROR:
            self.error("type-mismatch", f"{what}: expected {target}, found {e.ty}", e.span)
        return e

    # -------------------------------------------------------- expressions
    def expr(self, e: A.Expr, env: dict[str, A.Type]) -> A.Expr:
        if isinstance(e, _Ascribed):
            return self.coerce(self.expr(e.expr, env), e.declared, "val definition")
        method = getattr(self, "_" + type(e).__name__, None)
        if method is None:
            self.error("unsupported", f"unsupported construct {type(e).__name__}", e.span)
            return e.with_type(ERROR) if hasattr(e, "ty") else e
        return method(e, env)

    def _Literal(self, e: A.Literal, env):
        return e

    def _Var(self, e: A.Var, env):
        if e.name not in env:
            if e.name in self.defs:
                return e.with_type(self.error("unsupported", f"function {e.name} used as a value", e.span))
            return e.with_type(self.error("unknown-identifier", f"unknown identifier {e.name}", e.span))
        return e.with_type(env[e.name])

    def _Let(self, e: A.Let, env):
        if "__" in e.name:
            self.error("unsupported", f"identifier {e.name} uses the reserved '__'", e.span)
        value = self.expr(e.value, env)
        inner = dict(env)
        inner[e.name] = value.ty
        body = self.expr(e.body, inner)
        return replace(e, value=value, body=body, ty=body.ty)

    def _If(self, e: A.If, env):
        cond = self.expect(self.expr(e.cond, env), A.BOOL, "if condition")
        then, orelse = self.expr(e.then, env), self.expr(e.orelse, env)
        ty = self.unify(then, orelse, e.span)
        return replace(e, cond=cond, then=self.coerce(then, ty, "if branch"),
                       orelse=self.coerce(orelse, ty, "else branch"), ty=ty)

    def unify(self, a: A.Expr, b: A.Expr, span: Span) -> A.Type:
        if a.ty == b.ty:
            return a.ty
        if ERROR in (a.ty, b.ty):
            return ERROR
        if _numeric(a.ty) and _numeric(b.ty):
            if widens_to(a.ty, b.ty):
                return b.ty
            if widens_to(b.ty, a.ty):
                return a.ty
            return promote(a.ty, b.ty)
        if isinstance(a.ty, A.TupleType) and isinstance(b.ty, A.TupleType) and len(a.ty.items) == len(b.ty.items):
            return a.ty if all(widens_to(y, x) for x, y in zip(a.ty.items, b.ty.items)) else b.ty
        return self.error("type-mismatch", f"branches have incompatible types {a.ty} and {b.ty}", span)

    def _Unary(self, e: A.Unary, env):
        x = self.expr(e.operand, env)
        t = x.ty
        if t == ERROR:
            return replace(e, operand=x, ty=ERROR)
        op = e.op
        if op == "not":
            return replace(e, operand=self.expect(x, A.BOOL, "operand of !"), ty=A.BOOL)
        if op == "neg":
            if isinstance(t, A.IntType) and t.bits < 32:
                x = implicit_cast(x, A.INT32)
                t = A.INT32
            if not _numeric(t):
                return replace(e, operand=x, ty=self.error("type-mismatch", f"cannot negate {t}", e.span))
            return replace(e, operand=x, ty=t)
        if op == "abs" and isinstance(t, A.IntType):
            if t.bits < 32:
                x = implicit_cast(x, A.INT32)
                t = A.INT32
            return replace(e, operand=x, ty=t)
        if isinstance(t, A.IntType) and op in ("sqrt", "ceil", "floor", "rint"):
            x = implicit_cast(x, A.FLOAT64)
            t = A.FLOAT64
        if not isinstance(t, A.FloatType):
            return replace(e, operand=x, ty=self.error("type-mismatch", f"{op} expects a floating-point operand, found {t}", e.span))
        if op in ("isNaN", "isFinite", "isInfinite", "isPositiveSign"):
            return replace(e, operand=x, ty=A.BOOL)
        if op == "toBits":
            return replace(e, operand=x, ty=A.INT64 if t.fmt is F64 else A.INT32)
        return replace(e, operand=x, ty=t)

    def _Binary(self, e: A.Binary, env):
        lhs, rhs = self.expr(e.lhs, env), self.expr(e.rhs, env)
        lt, rt = lhs.ty, rhs.ty
        op = e.op
        if ERROR in (lt, rt):
            return replace(e, lhs=lhs, rhs=rhs, ty=ERROR)
        if op in A.LOGIC_OPS:
            return replace(e, lhs=self.expect(lhs, A.BOOL, f"operand of {op}"),
                           rhs=self.expect(rhs, A.BOOL, f"operand of {op}"), ty=A.BOOL)
        if op in ("==", "!="):
            if lt == rt and isinstance(lt, (A.TypeVar, A.BoolType)):
                return replace(e, lhs=lhs, rhs=rhs, ty=A.BOOL)
        if not (_numeric(lt) and _numeric(rt)):
            return replace(e, lhs=lhs, rhs=rhs,
                           ty=self.error("type-mismatch", f"operator {op} not applicable to {lt} and {rt}", e.span))
        common = promote(lt, rt)
        lhs, rhs = implicit_cast(lhs, common), implicit_cast(rhs, common)
        if op == "%" and isinstance(common, A.FloatType):
            return replace(e, lhs=lhs, rhs=rhs, ty=self.error(
                "fp-modulo-unsupported",
                "floating-point modulo is not supported (its rounding differs between the JVM and SMT-LIB)",
                e.span, MODULO_HINT))
        if op in A.COMPARE_OPS:
            return replace(e, lhs=lhs, rhs=rhs, ty=A.BOOL)
        return replace(e, lhs=lhs, rhs=rhs, ty=common)

    def _Cast(self, e: A.Cast, env):
        x = self.expr(e.operand, env)
        if x.ty != ERROR and not _numeric(x.ty):
            return replace(e, operand=x, ty=self.error("type-mismatch", f"cannot convert {x.ty} to {e.target}", e.span))
        return replace(e, operand=x, ty=e.target)

    def _FromBits(self, e: A.FromBits, env):
        x = self.expr(e.operand, env)
        want = A.INT64 if e.target.fmt is F64 else A.INT32
        return replace(e, operand=self.coerce(x, want, "fromBits argument"), ty=e.target)

    def _MathCall(self, e: A.MathCall, env):
        args = [self.expr(a, env) for a in e.args]
        if any(a.ty == ERROR for a in args):
            return replace(e, args=tuple(args), ty=ERROR)
        for a in args:
            if not _numeric(a.ty):
                return replace(e, args=tuple(args), ty=self.error(
                    "type-mismatch", f"math.{e.func} expects numeric arguments, found {a.ty}", a.span))
        ty = A.FLOAT32 if all(a.ty == A.FLOAT32 for a in args) else A.FLOAT64
        return replace(e, args=tuple(implicit_cast(a, ty) for a in args), ty=ty)

    def _TupleExpr(self, e: A.TupleExpr, env):
        items = tuple(self.expr(x, env) for x in e.items)
        if any(x.ty == ERROR for x in items):
            return replace(e, items=items, ty=ERROR)
        return replace(e, items=items, ty=A.TupleType(tuple(x.ty for x in items)))

    def _Proj(self, e: A.Proj, env):
        t = self.expr(e.tuple, env)
        if t.ty == ERROR:
            return replace(e, tuple=t, ty=ERROR)
        if not isinstance(t.ty, A.TupleType) or not 1 <= e.index <= len(t.ty.items):
            return replace(e, tuple=t, ty=self.error("type-mismatch", f"no component _{e.index} in {t.ty}", e.span))
        return replace(e, tuple=t, ty=t.ty.items[e.index - 1])

    def _Assert(self, e: A.Assert, env):
        cond = self.expect(self.expr(e.cond, env), A.BOOL, "assertion")
        body = self.expr(e.body, env)
        return replace(e, cond=cond, body=body, ty=body.ty)

    def _Checked(self, e: A.Checked, env):
        node = self.expr(e.node, env)
        return replace(e, node=node, ty=node.ty)

    def _Call(self, e: A.Call, env):
        args = [self.expr(a, env) for a in e.args]
        if e.func not in self.defs:
            return replace(e, args=tuple(args), ty=self.error("unknown-identifier", f"unknown function {e.func}", e.span))
        callee = self.defs[e.func]
        if len(args) != len(callee.params):
            return replace(e, args=tuple(args), ty=self.error(
                "type-mismatch", f"{e.func} expects {len(callee.params)} argument(s), got {len(args)}", e.span))
        if any(a.ty == ERROR for a in args):
            return replace(e, args=tuple(args), ty=ERROR)
        mapping: dict[str, A.Type] = {}
        if e.type_args:
            if len(e.type_args) != len(callee.type_params):
                return replace(e, args=tuple(args), ty=self.error(
                    "type-mismatch", f"{e.func} expects {len(callee.type_params)} type argument(s)", e.span))
            mapping = {tv.name: ta for tv, ta in zip(callee.type_params, e.type_args)}
        else:
            for (pname, pty), a in zip(callee.params, args):
                self._infer(pty, a.ty, mapping)
            missing = [tv.name for tv in callee.type_params if tv.name not in mapping]
            if missing:
                return replace(e, args=tuple(args), ty=self.error(
                    "type-mismatch", f"cannot infer type argument(s) {', '.join(missing)} of {e.func}", e.span))
        for tv in callee.type_params:
            inst = mapping[tv.name]
            if not tv.noeq and _contains_float(inst):
                self.error("noeq-violation",
                           f"type parameter {tv.name} of {e.func} is instantiated with {inst}; "
                           f"floating-point equality is not reflexive, annotate it as `{tv.name} @noeq`",
                           e.span)
        type_args = tuple(mapping[tv.name] for tv in callee.type_params)
        typed_args = tuple(self.coerce(a, A.substitute(pty, mapping), f"argument {pname} of {e.func}")
                           for (pname, pty), a in zip(callee.params, args))
        result = A.substitute(self.result_type(e.func, e.span), mapping)
        return replace(e, args=typed_args, type_args=type_args, ty=result)

    def _infer(self, pattern: A.Type, actual: A.Type, mapping: dict[str, A.Type]) -> None:
        if isinstance(pattern, A.TypeVar):
            mapping.setdefault(pattern.name, actual)
        elif isinstance(pattern, A.TupleType) and isinstance(actual, A.TupleType) \
                and len(pattern.items) == len(actual.items):
            for p, a in zip(pattern.items, actual.items):
                self._infer(p, a, mapping)


def implicit_cast(e: A.Expr, target: A.Type) -> A.Expr:
    if e.ty == target:
        return e
    if isinstance(e, A.Literal) and isinstance(e.value, int) and not isinstance(e.value, bool):
        if isinstance(target, A.FloatType):
            return A.Literal(round_int(e.value, target.fmt), target, span=e.span)
        if isinstance(target, A.IntType):
            return A.Literal(target.wrap(e.value), target, span=e.span)
    return A.Cast(target, e, implicit=True, ty=target, span=e.span)


def typecheck(program: A.Program) -> A.Program:
    """Typecheck ``program``; raises :class:`TypeCheckError` with all diagnostics."""
    return TypeChecker(program).run()


def typecheck_expr(expr: A.Expr, env: dict[str, A.Type]) -> A.Expr:
    """Typecheck a standalone expression (used for contract predicates)."""
    tc = TypeChecker(A.Program())
    out = tc.expr(expr, env)
    if tc.diags:
        raise TypeCheckError(tc.diags)
    return out
