"""Expression encoding into SMT-LIB floating-point and bit-vector terms.

The encoder accumulates definitions and axioms in append-only lists, so a
verification condition can snapshot "everything defined so far" by length.
Obligations met during encoding are reported through ``on_obligation``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from ..frontend import ast as A
from ..mathspec.contracts import contract_for
from .flatten import UnsupportedConstruct
from .smt import bv_literal, fmt_suffix, fp_sort, is_atom, literal, sort_name, sort_of

RNE = "RNE"
_ROUND_MODE = {"ceil": "RTP", "floor": "RTN", "rint": "RNE"}
_FP_ARITH = {"+": "fp.add", "-": "fp.sub", "*": "fp.mul", "/": "fp.div"}
_FP_CMP = {"<": "fp.lt", "<=": "fp.leq", ">": "fp.gt", ">=": "fp.geq", "==": "fp.eq"}
_BV_ARITH = {"+": "bvadd", "-": "bvsub", "*": "bvmul", "/": "bvsdiv", "%": "bvsrem"}
_BV_CMP = {"<": "bvslt", "<=": "bvsle", ">": "bvsgt", ">=": "bvsge", "==": "="}

# nesting limit when a callee's postcondition itself calls contracted functions
MAX_CONTRACT_NESTING = 3


@dataclass
class Frame:
    scope: dict[str, str]
    mapping: dict[str, A.Type] = field(default_factory=dict)
    emit: bool = True


def conj(terms) -> str:
    terms = [t for t in terms if t != "true"]
    if not terms:
        return "true"
    return terms[0] if len(terms) == 1 else "(and " + " ".join(terms) + ")"


def neg(term: str) -> str:
    return term[5:-1] if term.startswith("(not ") and term.endswith(")") and _balanced(term[5:-1]) \
        else f"(not {term})"


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


class Encoder:
    def __init__(self, program: A.Program,
                 on_obligation: Optional[Callable[..., None]] = None):
        self.fns = {f.name: f for f in program.functions}
        self.declarations: list[str] = []
        self.assertions: list[str] = []
        self.opaque_marks: list[int] = []  # declaration indices of contract-abstracted symbols
        self.uf_marks: list[int] = []  # declaration indices needing the UF logic
        self.counters: dict[str, int] = {}
        self.declared: set[str] = set()
        self.apps: dict[tuple, list[str]] = {}
        self.on_obligation = on_obligation
        self.nesting = 0

    # ------------------------------------------------------ bookkeeping
    def fresh(self, kind: str, name: str) -> str:
        key = f"{kind}.{name}"
        n = self.counters.get(key, 0)
        self.counters[key] = n + 1
        return f"{key}.{n}"

    def declare(self, line: str, symbol: str, opaque: bool = False, uf: bool = False) -> None:
        if symbol in self.declared:
            return
        self.declared.add(symbol)
        if opaque:
            self.opaque_marks.append(len(self.declarations))
        if uf:
            self.uf_marks.append(len(self.declarations))
        self.declarations.append(line)

    def const(self, symbol: str, sort: str, opaque: bool = False) -> str:
        self.declare(f"(declare-const {symbol} {sort})", symbol, opaque)
        return symbol

    def define(self, kind: str, name: str, sort: str, term: str) -> str:
        sym = self.fresh(kind, name)
        self.declare(f"(define-fun {sym} () {sort} {term})", sym)
        return sym

    def share(self, term: str, sort: str) -> str:
        """Name a compound term so it can be repeated cheaply."""
        return term if is_atom(term) else self.define("s", "t", sort, term)

    def assume(self, term: str) -> None:
        if term != "true":
            self.assertions.append(f"(assert {term})")

    def sort(self, ty: A.Type, fr: Frame) -> str:
        ty = A.substitute(ty, fr.mapping)
        if isinstance(ty, A.TypeVar):
            name = sort_name(ty)
            self.declare(f"(declare-sort {name} 0)", name, uf=True)
        elif isinstance(ty, A.TupleType):
            raise UnsupportedConstruct("tuple value after flattening")
        return sort_of(ty)

    def resolve(self, ty: A.Type, fr: Frame) -> A.Type:
        return A.substitute(ty, fr.mapping)

    def obligation(self, fr: Frame, kind: str, span: A.Span):
        if not fr.emit or self.on_obligation is None:
            return None
        return self.on_obligation("reserve", kind, span)

    def discharge(self, slot, goal: str, path: tuple[str, ...]) -> None:
        if slot is not None:
            self.on_obligation("fill", slot, goal, path, len(self.declarations), len(self.assertions))

    # ---------------------------------------------------------- terms
    def term(self, e: A.Expr, fr: Frame, path: tuple[str, ...] = ()) -> str:
        method = getattr(self, "_" + type(e).__name__, None)
        if method is None:
            raise UnsupportedConstruct(type(e).__name__)
        return method(e, fr, path)

    def terms(self, e: A.Expr, fr: Frame, path=()) -> list[str]:
        """Result terms of an expression: one per component for a flattened tuple body."""
        if isinstance(e, A.TupleExpr):
            return [self.term(x, fr, path) for x in e.items]
        return [self.term(e, fr, path)]

    def _Literal(self, e, fr, path):
        return literal(e.value, e.ty)

    def _Var(self, e, fr, path):
        try:
            return fr.scope[e.name]
        except KeyError:
            raise UnsupportedConstruct(f"unbound variable {e.name}") from None

    def _Let(self, e, fr, path):
        value = self.term(e.value, fr, path)
        if not is_atom(value):
            value = self.define("l", e.name, self.sort(e.value.ty, fr), value)
        inner = Frame(dict(fr.scope), fr.mapping, fr.emit)
        inner.scope[e.name] = value
        return self.term(e.body, inner, path)

    def _If(self, e, fr, path):
        c = self.term(e.cond, fr, path)
        t = self.term(e.then, fr, path + (c,))
        f = self.term(e.orelse, fr, path + (neg(c),))
        return f"(ite {c} {t} {f})"

    def _Assert(self, e, fr, path):
        slot = self.obligation(fr, "userAssert", e.span)
        c = self.term(e.cond, fr, path)
        self.discharge(slot, c, path)
        return self.term(e.body, fr, path + (c,))

    def _Checked(self, e, fr, path):
        node = e.node
        if isinstance(node, A.Binary):
            slot = self.obligation(fr, "nanCheck", e.span) if "nanCheck" in e.kinds else None
            sort = self.sort(node.lhs.ty, fr)
            a = self.share(self.term(node.lhs, fr, path), sort)
            b = self.share(self.term(node.rhs, fr, path), sort)
            self.discharge(slot, conj([f"(not (fp.isNaN {a}))", f"(not (fp.isNaN {b}))"]), path)
            return self.compare(node.op, a, b, self.resolve(node.lhs.ty, fr))
        if isinstance(node, A.Cast):
            slots = [(k, self.obligation(fr, k, e.span)) for k in ("castNaN", "castRange") if k in e.kinds]
            src = self.resolve(node.operand.ty, fr)
            x = self.share(self.term(node.operand, fr, path), sort_of(src))
            for kind, slot in slots:
                if kind == "castNaN":
                    self.discharge(slot, f"(not (fp.isNaN {x}))", path)
                else:
                    self.discharge(slot, self.cast_in_range(x, src, node.target), path)
            return self.cast(x, src, node.target)
        return self.term(node, fr, path)

    # -------------------------------------------------------- operators
    def _Unary(self, e, fr, path):
        t = self.resolve(e.operand.ty, fr)
        x = self.term(e.operand, fr, path)
        op = e.op
        if op == "not":
            return neg(x)
        if isinstance(t, A.IntType):
            if op == "neg":
                return f"(bvneg {x})"
            if op == "abs":
                x = self.share(x, sort_of(t))
                return f"(ite (bvslt {x} {bv_literal(0, t.bits)}) (bvneg {x}) {x})"
            raise UnsupportedConstruct(f"{op} on {t}")
        fmt = t.fmt
        if op == "neg":
            return f"(fp.neg {x})"
        if op == "abs":
            return f"(fp.abs {x})"
        if op == "sqrt":
            return f"(fp.sqrt {RNE} {x})"
        if op in _ROUND_MODE:
            return f"(fp.roundToIntegral {_ROUND_MODE[op]} {x})"
        if op == "isNaN":
            return f"(fp.isNaN {x})"
        if op == "isInfinite":
            return f"(fp.isInfinite {x})"
        if op == "isFinite":
            x = self.share(x, fp_sort(fmt))
            return f"(not (or (fp.isNaN {x}) (fp.isInfinite {x})))"
        if op == "isPositiveSign":
            return f"(fp.isPositive {x})"
        if op == "toBits":
            # a fresh bit pattern per distinct operand, pinned only through to_fp: unique for
            # non-NaN values, any NaN encoding otherwise, so payloads stay unconstrained
            x = self.share(x, fp_sort(fmt))
            key = ("toBits", fmt.name, x)
            if key not in self.apps:
                sym = self.const(self.fresh("b", f"toBits{fmt_suffix(fmt)}"), f"(_ BitVec {fmt.width})",
                                 opaque=True)
                self.assume(f"(= ((_ to_fp {fmt.ebits} {fmt.sbits}) {sym}) {x})")
                self.apps[key] = [sym]
            return self.apps[key][0]
        raise UnsupportedConstruct(f"unary {op}")

    def compare(self, op: str, a: str, b: str, ty: A.Type) -> str:
        if isinstance(ty, A.FloatType):
            if op == "!=":
                return f"(not (fp.eq {a} {b}))"
            return f"({_FP_CMP[op]} {a} {b})"
        if isinstance(ty, A.IntType):
            if op == "!=":
                return f"(not (= {a} {b}))"
            return f"({_BV_CMP[op]} {a} {b})"
        if isinstance(ty, A.TypeVar) and ty.noeq:
            fn = f"eq{ty.name}"
            s = sort_name(ty)
            self.declare(f"(declare-fun {fn} ({s} {s}) Bool)", fn, opaque=True, uf=True)
            app = f"({fn} {a} {b})"
        else:
            app = f"(= {a} {b})"
        if op == "==":
            return app
        if op == "!=":
            return f"(not {app})"
        raise UnsupportedConstruct(f"ordering comparison on {ty}")

    def _Binary(self, e, fr, path):
        op = e.op
        if op in ("&&", "||"):
            a = self.term(e.lhs, fr, path)
            b = self.term(e.rhs, fr, path + ((a,) if op == "&&" else (neg(a),)))
            return f"({'and' if op == '&&' else 'or'} {a} {b})"
        t = self.resolve(e.lhs.ty, fr)
        slot = None
        if isinstance(t, A.IntType) and op in ("/", "%"):
            slot = self.obligation(fr, "intDivByZero", e.span)
        a = self.term(e.lhs, fr, path)
        b = self.term(e.rhs, fr, path)
        if op in A.COMPARE_OPS:
            return self.compare(op, a, b, t)
        if isinstance(t, A.IntType):
            if slot is not None:
                b = self.share(b, sort_of(t))
                self.discharge(slot, f"(not (= {b} {bv_literal(0, t.bits)}))", path)
            if op in _BV_ARITH:
                return f"({_BV_ARITH[op]} {a} {b})"
            a, b = self.share(a, sort_of(t)), self.share(b, sort_of(t))
            cmp = "bvslt" if op == "min" else "bvsgt"
            return f"(ite ({cmp} {a} {b}) {a} {b})"
        if op in _FP_ARITH:
            return f"({_FP_ARITH[op]} {RNE} {a} {b})"
        if op in ("min", "max"):
            sort = sort_of(t)
            a, b = self.share(a, sort), self.share(b, sort)
            # fp.min/fp.max leave the order of +0 and -0 unspecified
            first, second = (a, b) if op == "min" else (b, a)
            return (f"(ite (and (fp.isZero {a}) (fp.isZero {b})) (ite (fp.isNegative {a}) {first} {second}) "
                    f"(fp.{op} {a} {b}))")
        raise UnsupportedConstruct(f"binary {op} on {t}")

    # ------------------------------------------------------------ casts
    def _Cast(self, e, fr, path):
        src = self.resolve(e.operand.ty, fr)
        x = self.term(e.operand, fr, path)
        if isinstance(src, A.FloatType) and isinstance(e.target, A.IntType):
            x = self.share(x, sort_of(src))
        return self.cast(x, src, e.target)

    def cast(self, x: str, src: A.Type, dst: A.Type) -> str:
        if src == dst:
            return x
        if isinstance(dst, A.FloatType):
            f = dst.fmt
            return f"((_ to_fp {f.ebits} {f.sbits}) {RNE} {x})"
        if isinstance(src, A.IntType):
            if dst.bits > src.bits:
                return f"((_ sign_extend {dst.bits - src.bits}) {x})"
            return f"((_ extract {dst.bits - 1} 0) {x})"
        wide = dst if dst.bits >= 32 else A.INT32
        fmt = src.fmt
        t = f"(fp.roundToIntegral RTZ {x})"
        lo = literal(float(wide.min), A.float_type(fmt))
        hi = literal(float(wide.max + 1), A.float_type(fmt))
        body = (f"(ite (fp.isNaN {x}) {bv_literal(0, wide.bits)} "
                f"(ite (fp.lt {t} {lo}) {bv_literal(wide.min, wide.bits)} "
                f"(ite (fp.geq {t} {hi}) {bv_literal(wide.max, wide.bits)} "
                f"((_ fp.to_sbv {wide.bits}) RTZ {x}))))")
        if wide is not dst:
            body = f"((_ extract {dst.bits - 1} 0) {body})"
        return body

    def cast_in_range(self, x: str, src: A.FloatType, dst: A.IntType) -> str:
        fmt = src.fmt
        t = f"(fp.roundToIntegral RTZ {x})"
        lo = literal(float(dst.min), A.float_type(fmt))
        hi = literal(float(dst.max + 1), A.float_type(fmt))
        return f"(or (fp.isNaN {x}) (and (fp.geq {t} {lo}) (fp.lt {t} {hi})))"

    def _FromBits(self, e, fr, path):
        f = e.target.fmt
        return f"((_ to_fp {f.ebits} {f.sbits}) {self.term(e.operand, fr, path)})"

    # ------------------------------------------------------------ calls
    def _MathCall(self, e, fr, path):
        ty = self.resolve(e.ty, fr)
        fmt = ty.fmt
        sort = fp_sort(fmt)
        args = [self.share(self.term(a, fr, path), sort) for a in e.args]
        fn = f"{e.func}{fmt_suffix(fmt)}"
        self.declare(f"(declare-fun {fn} ({' '.join([sort] * len(args))}) {sort})", fn, opaque=True, uf=True)
        key = ("math", fn, tuple(args))
        if key in self.apps:
            return self.apps[key][0]
        app = f"({fn} {' '.join(args)})"
        self.apps[key] = [app]
        contract = contract_for(e.func, fmt)
        scope = dict(zip(contract.params, args))
        scope["r"] = app
        cfr = Frame(scope, {}, emit=False)
        for clause in contract.axioms():
            self.assume(self.term(clause.expr, cfr))
        return app

    def _Call(self, e, fr, path):
        callee = self.fns.get(e.func)
        if callee is None:
            raise UnsupportedConstruct(f"call to unknown function {e.func}")
        mapping = {tv.name: self.resolve(ta, fr) for tv, ta in zip(callee.type_params, e.type_args)}
        cfr_types = Frame({}, mapping, emit=False)
        slot = self.obligation(fr, "callPrecondition", e.span) if callee.precondition is not None else None
        args = []
        for a, (pname, pty) in zip(e.args, callee.params):
            args.append(self.share(self.term(a, fr, path), self.sort(pty, cfr_types)))
        scope = dict(zip(callee.param_names, args))
        pre = None
        if callee.precondition is not None:
            pre = self.term(callee.precondition, Frame(dict(scope), mapping, emit=False))
        self.discharge(slot, pre, path)
        key = ("call", e.func, tuple(sorted((k, str(v)) for k, v in mapping.items())), tuple(args))
        results = self.apps.get(key)
        if results is None:
            if callee.postcondition is not None or callee.opaque:
                results = self._modular(callee, scope, mapping, pre)
            else:
                self.apps[key] = results = []  # placeholder guards accidental recursion
                results.extend(self.terms(callee.body, Frame(dict(scope), mapping, emit=False)))
            self.apps[key] = results
        return results[e.component or 0]

    def _modular(self, callee: A.FunctionDef, scope: dict[str, str], mapping, pre: Optional[str]) -> list[str]:
        fr = Frame({}, mapping, emit=False)
        result_types = A.scalar_types(callee.result)
        results = [self.const(self.fresh("c", callee.name), self.sort(t, fr), opaque=True) for t in result_types]
        post = callee.postcondition
        if post is None or self.nesting >= MAX_CONTRACT_NESTING:
            return results
        pscope = dict(scope)
        if len(results) == 1:
            pscope[post.param] = results[0]
        else:
            for i, r in enumerate(results, 1):
                pscope[f"{post.param}__{i}"] = r
        self.nesting += 1
        try:
            goal = self.term(post.body, Frame(pscope, mapping, emit=False))
        finally:
            self.nesting -= 1
        self.assume(goal if pre is None else f"(=> {pre} {goal})")
        return results


__all__ = ["Encoder", "Frame", "UnsupportedConstruct", "conj", "neg"]
