"""Tuple elimination.

Tuple-typed parameters, lets and intermediate values are split into scalar
components named ``name__1``, ``name__2`` (nested tuples extend the path,
``name__1__2``).  A function returning a tuple keeps a single top-level
``TupleExpr`` of scalars as its body; its postcondition refers to the flat
components ``r__1 .. r__n``.
"""
from __future__ import annotations

from dataclasses import replace

from ..frontend import ast as A


class UnsupportedConstruct(Exception):
    pass


def _paths(name: str, ty: A.Type) -> list[tuple[str, A.Type]]:
    if isinstance(ty, A.TupleType):
        return [p for i, t in enumerate(ty.items, 1) for p in _paths(f"{name}__{i}", t)]
    return [(name, ty)]


def _width(ty: A.Type) -> int:
    return sum(_width(t) for t in ty.items) if isinstance(ty, A.TupleType) else 1


def _flat_type(ty: A.Type) -> A.Type:
    scalars = A.scalar_types(ty)
    return A.TupleType(tuple(scalars)) if len(scalars) > 1 else scalars[0]


def _has_tuple(ty: A.Type) -> bool:
    return isinstance(ty, A.TupleType)


class Flattener:
    def __init__(self, program: A.Program):
        self.fns = {f.name: f for f in program.functions}

    def comps(self, e: A.Expr, env: dict[str, list[A.Expr]]) -> list[A.Expr]:
        """Scalar components of ``e`` (a one-element list for scalars)."""
        if not _has_tuple(e.ty):
            return [self.scalar(e, env)]
        if isinstance(e, A.Var):
            return list(env[e.name])
        if isinstance(e, A.TupleExpr):
            return [c for x in e.items for c in self.comps(x, env)]
        if isinstance(e, A.Proj):
            return self._proj(e, env)
        if isinstance(e, A.Let):
            return self._let(e, env, self.comps)
        if isinstance(e, A.If):
            cond = self.scalar(e.cond, env)
            return [A.If(cond, t, f, ty=t.ty, span=e.span)
                    for t, f in zip(self.comps(e.then, env), self.comps(e.orelse, env))]
        if isinstance(e, A.Assert):
            cond = self.scalar(e.cond, env)
            return [A.Assert(cond, b, ty=b.ty, span=e.span) for b in self.comps(e.body, env)]
        if isinstance(e, A.Call):
            call = self._call(e, env)
            types = A.scalar_types(e.ty)
            return [replace(call, component=i, ty=t) for i, t in enumerate(types)]
        raise UnsupportedConstruct(f"tuple-valued {type(e).__name__}")

    def _proj(self, e: A.Proj, env) -> list[A.Expr]:
        items = e.tuple.ty.items
        start = sum(_width(t) for t in items[:e.index - 1])
        return self.comps(e.tuple, env)[start:start + _width(items[e.index - 1])]

    def _let(self, e: A.Let, env, body_fn):
        if _has_tuple(e.value.ty):
            parts = self.comps(e.value, env)
            names = _paths(e.name, e.value.ty)
            inner = dict(env)
            inner[e.name] = [A.Var(n, ty=t, span=e.span) for n, t in names]
            body = body_fn(e.body, inner)
            wrap = lambda b: _wrap_lets(list(zip(names, parts)), b, e.span)
        else:
            value = self.scalar(e.value, env)
            inner = dict(env)
            inner.pop(e.name, None)
            body = body_fn(e.body, inner)
            wrap = lambda b: A.Let(e.name, value, b, ty=b.ty, span=e.span)
        if isinstance(body, list):
            return [wrap(b) for b in body]
        return wrap(body)

    def _call(self, e: A.Call, env) -> A.Call:
        if any(_has_tuple(t) for t in e.type_args):
            raise UnsupportedConstruct("type parameter instantiated with a tuple type")
        args = tuple(c for a in e.args for c in self.comps(a, env))
        return replace(e, args=args)

    def scalar(self, e: A.Expr, env: dict[str, list[A.Expr]]) -> A.Expr:
        if isinstance(e, A.Proj):
            (only,) = self._proj(e, env)
            return only
        if isinstance(e, A.Let):
            return self._let(e, env, self.scalar)
        if isinstance(e, A.Var) and e.name in env:
            (only,) = env[e.name]
            return only
        if isinstance(e, A.Call):
            return self._call(e, env)
        return A.map_children(e, lambda c: self.scalar(c, env))

    def function(self, fn: A.FunctionDef) -> A.FunctionDef:
        env: dict[str, list[A.Expr]] = {}
        params = []
        for pname, pty in fn.params:
            parts = _paths(pname, pty)
            params.extend(parts)
            if _has_tuple(pty):
                env[pname] = [A.Var(n, ty=t, span=fn.span) for n, t in parts]
        pre = self.scalar(fn.precondition, env) if fn.precondition is not None else None
        if _has_tuple(fn.result):
            items = self.comps(fn.body, env)
            body = A.TupleExpr(tuple(items), ty=_flat_type(fn.result), span=fn.body.span)
        else:
            body = self.scalar(fn.body, env)
        post = fn.postcondition
        if post is not None:
            penv = dict(env)
            if _has_tuple(fn.result):
                penv[post.param] = [A.Var(f"{post.param}__{i}", ty=t, span=post.span)
                                    for i, t in enumerate(A.scalar_types(fn.result), 1)]
            else:
                penv.pop(post.param, None)
            post = A.Lambda(post.param, self.scalar(post.body, penv), span=post.span)
        return replace(fn, params=tuple(params), result=_flat_type(fn.result), body=body,
                       precondition=pre, postcondition=post)


def _wrap_lets(bindings, body: A.Expr, span: A.Span) -> A.Expr:
    for (name, ty), value in reversed(bindings):
        body = A.Let(name, value, body, ty=body.ty, span=span)
    return body


def flatten_tuples(program: A.Program) -> A.Program:
    """Explode every tuple into scalars; programs without tuples are returned unchanged."""
    if not _mentions_tuples(program):
        return program
    fl = Flattener(program)
    return replace(program, functions=tuple(fl.function(f) for f in program.functions))


def _mentions_tuples(program: A.Program) -> bool:
    for fn in program.functions:
        if any(_has_tuple(t) for _, t in fn.params):
            return True
        if _has_tuple(fn.result) and not isinstance(fn.body, A.TupleExpr):
            return True
        body = fn.body.items if isinstance(fn.body, A.TupleExpr) and _has_tuple(fn.result) else (fn.body,)
        for root in body:
            for node in A.walk(root):
                if isinstance(node, (A.TupleExpr, A.Proj)) or _has_tuple(node.ty):
                    return True
        if fn.postcondition is not None:
            for node in A.walk(fn.postcondition.body):
                if isinstance(node, (A.TupleExpr, A.Proj)) or _has_tuple(node.ty):
                    return True
    return False
