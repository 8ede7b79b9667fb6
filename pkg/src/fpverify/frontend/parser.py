"""Recursive-descent parser for FPL, a small Scala-flavoured language.

The surface follows Scala closely enough that contracts written as::

    def f(x: Double): Double = {
      require(x.isFinite)
      x * 2.0
    }.ensuring(r => !r.isNaN)

parse unchanged.  Higher-order functions, classes and pattern matching are
rejected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from ..floats import F32, F64, FloatFormat, parse_decimal, parse_hex
from . import ast as A
from .ast import Span
from .errors import ParseError
from .lexer import Token, tokenize

ANNOTATIONS = {"opaque", "unchecked"}

UNARY_BUILTINS = {"abs", "sqrt", "ceil", "floor", "rint"}
BINARY_BUILTINS = {"min", "max"}

PREDICATE_METHODS = {"isNaN", "isFinite", "isInfinite", "isPositiveSign", "toBits"}
CAST_METHODS = {
    "toByte": A.INT8, "toShort": A.INT16, "toInt": A.INT32, "toLong": A.INT64,
    "toFloat": A.FLOAT32, "toDouble": A.FLOAT64,
}

# operators that cannot begin an expression, so a line starting with one
# continues the previous line
_CONTINUATION_OPS = {"*", "/", "%", "&&", "||", "==", "!=", "<", "<=", ">", ">=", "."}

_BINARY_LEVELS = [
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
]


@dataclass(frozen=True)
class _Ensuring(A.Expr):
    expr: A.Expr
    post: A.Lambda
    ty: Optional[A.Type] = None
    span: Span = A.NO_SPAN


class Parser:
    def __init__(self, source: str, source_name: str = "<input>",
                 default_float: FloatFormat = F64):
        self.source_name = source_name
        self.tokens = tokenize(source, source_name)
        self.pos = 0
        self.default_float = default_float
        self.type_params: dict[str, A.TypeVar] = {}

    # ------------------------------------------------------------ helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def error(self, message: str, expected=(), tok: Optional[Token] = None):
        t = tok or self.tok
        raise ParseError(message, t.span, frozenset(expected), self.source_name)

    def expect_op(self, op: str) -> Token:
        if not self.tok.is_op(op):
            self.error(f"unexpected {self.tok}", {op})
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "IDENT":
            self.error(f"unexpected {self.tok}", {what})
        return self.advance()

    def expect_keyword(self, kw: str) -> Token:
        if not (self.tok.kind == "KEYWORD" and self.tok.text == kw):
            self.error(f"unexpected {self.tok}", {kw})
        return self.advance()

    def skip_newlines(self) -> None:
        while self.tok.kind == "NEWLINE" or self.tok.is_op(";"):
            self.advance()

    def skip_nl(self) -> None:
        while self.tok.kind == "NEWLINE":
            self.advance()

    def _continues(self, ops) -> bool:
        """True if the current token (possibly after one NEWLINE) is one of ``ops``."""
        t = self.tok
        if t.kind == "NEWLINE":
            nxt = self.peek()
            if nxt.kind == "OP" and nxt.text in ops and nxt.text in _CONTINUATION_OPS:
                self.advance()
                return True
            return False
        return t.kind == "OP" and t.text in ops

    def span_from(self, start: Token) -> Span:
        prev = self.tokens[max(self.pos - 1, 0)]
        return Span(start.span.line, start.span.col, prev.span.end_line, prev.span.end_col)

    # ----------------------------------------------------------- program
    def parse_program(self) -> A.Program:
        fns = []
        self.skip_newlines()
        while self.tok.kind != "EOF":
            fns.append(self.parse_function())
            if self.tok.kind not in ("NEWLINE", "EOF") and not self.tok.is_op(";"):
                self.error(f"unexpected {self.tok} after function definition", {"newline", "def"})
            self.skip_newlines()
        return A.Program(tuple(fns), source_name=self.source_name)

    def parse_function(self) -> A.FunctionDef:
        start = self.tok
        annotations = set()
        while self.tok.is_op("@"):
            self.advance()
            name = self.expect_ident("annotation")
            if name.text not in ANNOTATIONS:
                self.error(f"unknown annotation @{name.text}", ANNOTATIONS, name)
            annotations.add(name.text)
            self.skip_nl()
        if not (self.tok.kind == "KEYWORD" and self.tok.text == "def"):
            self.error(f"unexpected {self.tok}", {"def", "@"})
        self.advance()
        name = self.expect_ident("function name").text
        self.type_params = {}
        tparams = []
        if self.tok.is_op("["):
            self.advance()
            while True:
                noeq = False
                if self.tok.is_op("@"):
                    noeq = self._noeq_annotation()
                tv = self.expect_ident("type parameter").text
                if self.tok.is_op("@"):
                    noeq = self._noeq_annotation() or noeq
                t = A.TypeVar(tv, noeq)
                self.type_params[tv] = t
                tparams.append(t)
                if self.tok.is_op(","):
                    self.advance()
                    continue
                self.expect_op("]")
                break
        self.expect_op("(")
        params = []
        if not self.tok.is_op(")"):
            while True:
                pname = self.expect_ident("parameter name").text
                self.expect_op(":")
                params.append((pname, self.parse_type()))
                if self.tok.is_op(","):
                    self.advance()
                    continue
                break
        self.expect_op(")")
        result = None
        if self.tok.is_op(":"):
            self.advance()
            result = self.parse_type()
        self.expect_op("=")
        self.skip_nl()
        pre, body, post = self.parse_function_body()
        for node in A.walk(body):
            if isinstance(node, _Ensuring):
                self.error("ensuring is only allowed on a function body")
        fn = A.FunctionDef(
            name=name, type_params=tuple(tparams), params=tuple(params), result=result,
            body=body, precondition=pre, postcondition=post,
            opaque="opaque" in annotations, unchecked="unchecked" in annotations,
            span=self.span_from(start),
        )
        self.type_params = {}
        return fn

    def _noeq_annotation(self) -> bool:
        self.expect_op("@")
        ann = self.expect_ident("noeq")
        if ann.text != "noeq":
            self.error(f"unknown type-parameter annotation @{ann.text}", {"noeq"}, ann)
        return True

    def parse_function_body(self):
        pre = None
        if self.tok.is_op("{"):
            start = self.tok
            pre, body = self.parse_block(allow_require=True)
            body = self._postfix_tail(body, start)
        else:
            body = self.parse_expr()
        post = None
        if isinstance(body, _Ensuring):
            body, post = body.expr, body.post
        return pre, body, post

    def parse_type(self) -> A.Type:
        if self.tok.is_op("("):
            self.advance()
            items = [self.parse_type()]
            while self.tok.is_op(","):
                self.advance()
                items.append(self.parse_type())
            self.expect_op(")")
            if len(items) < 2:
                return items[0]
            return A.TupleType(tuple(items))
        t = self.expect_ident("type")
        if t.text in self.type_params:
            return self.type_params[t.text]
        if t.text not in A.TYPE_NAMES:
            self.error(f"unknown type {t.text}", set(A.TYPE_NAMES), t)
        return A.TYPE_NAMES[t.text]

    # ------------------------------------------------------------ blocks
    def parse_block(self, allow_require: bool = False):
        start = self.expect_op("{")
        self.skip_newlines()
        stmts = []
        pre = None
        first = True
        while True:
            if self.tok.is_op("}"):
                self.error("block must end with an expression", {"expression"})
            t = self.tok
            if t.kind == "KEYWORD" and t.text == "val":
                self.advance()
                name = self.expect_ident("variable name").text
                declared = None
                if self.tok.is_op(":"):
                    self.advance()
                    declared = self.parse_type()
                self.expect_op("=")
                self.skip_nl()
                value = self.parse_expr()
                if declared is not None:
                    value = _Ascribed(value, declared, span=value.span)
                stmts.append(("val", name, value, self.span_from(t)))
            elif t.kind == "IDENT" and t.text in ("require", "assert") and self.peek().is_op("("):
                self.advance()
                self.expect_op("(")
                cond = self.parse_expr()
                self.expect_op(")")
                if t.text == "require":
                    if not (allow_require and first):
                        self.error("require must be the first statement of a function body", tok=t)
                    pre = cond
                else:
                    stmts.append(("assert", None, cond, self.span_from(t)))
            else:
                expr = self.parse_expr()
                self.skip_newlines()
                if self.tok.is_op("}"):
                    self.advance()
                    break
                self.error(f"unexpected {self.tok}; only the last statement of a block may be an expression",
                           {"}"})
            first = False
            if not (self.tok.kind == "NEWLINE" or self.tok.is_op(";")):
                self.error(f"unexpected {self.tok}", {"newline", ";"})
            self.skip_newlines()
        for kind, name, value, span in reversed(stmts):
            if kind == "val":
                expr = A.Let(name, value, expr, span=span)
            else:
                expr = A.Assert(value, expr, span=span)
        return pre, expr

    # ------------------------------------------------------- expressions
    def parse_expr(self) -> A.Expr:
        if self.tok.kind == "KEYWORD" and self.tok.text == "if":
            start = self.advance()
            self.expect_op("(")
            cond = self.parse_expr()
            self.expect_op(")")
            self.skip_nl()
            then = self.parse_expr()
            if self.tok.kind == "NEWLINE" and self.peek().kind == "KEYWORD" and self.peek().text == "else":
                self.advance()
            self.expect_keyword("else")
            self.skip_nl()
            orelse = self.parse_expr()
            return A.If(cond, then, orelse, span=self.span_from(start))
        return self.parse_binary(0)

    def parse_binary(self, level: int) -> A.Expr:
        if level == len(_BINARY_LEVELS):
            return self.parse_prefix()
        ops = _BINARY_LEVELS[level]
        start = self.tok
        lhs = self.parse_binary(level + 1)
        while self._continues(ops):
            op = self.advance()
            self.skip_nl()
            if self.tok.kind == "KEYWORD" and self.tok.text == "if":
                rhs = self.parse_expr()
            else:
                rhs = self.parse_binary(level + 1)
            lhs = A.Binary(op.text, lhs, rhs, span=self.span_from(start))
        return lhs

    def parse_prefix(self) -> A.Expr:
        t = self.tok
        if t.is_op("-", "+", "!"):
            self.advance()
            nxt = self.tok
            if t.text in "-+" and nxt.kind in ("INT", "FLOAT", "HEXFLOAT") and nxt.span.start == (t.span.line, t.span.col + 1):
                lit = self.parse_number(negative=(t.text == "-"), start=t)
                return self._postfix_tail(lit, t)
            operand = self.parse_prefix()
            if t.text == "+":
                return operand
            return A.Unary("neg" if t.text == "-" else "not", operand, span=self.span_from(t))
        return self.parse_postfix()

    def parse_postfix(self) -> A.Expr:
        start = self.tok
        expr = self.parse_primary()
        return self._postfix_tail(expr, start)

    def _postfix_tail(self, expr: A.Expr, start: Token) -> A.Expr:
        while self._continues({"."}):
            self.advance()
            member = self.expect_ident("member name")
            m = member.text
            if m in PREDICATE_METHODS:
                expr = A.Unary(m, expr, span=self.span_from(start))
            elif m in CAST_METHODS:
                expr = A.Cast(CAST_METHODS[m], expr, span=self.span_from(start))
            elif m.startswith("_") and m[1:].isdigit():
                expr = A.Proj(expr, int(m[1:]), span=self.span_from(start))
            elif m == "ensuring":
                self.expect_op("(")
                lam = self.parse_lambda()
                self.expect_op(")")
                expr = _Ensuring(expr, lam, span=self.span_from(start))
            else:
                self.error(f"unknown member .{m}", PREDICATE_METHODS | set(CAST_METHODS) | {"ensuring", "_1"}, member)
        return expr

    def parse_lambda(self) -> A.Lambda:
        start = self.tok
        if self.tok.is_op("("):
            self.advance()
            name = self.expect_ident("lambda parameter").text
            if self.tok.is_op(":"):
                self.advance()
                self.parse_type()
            self.expect_op(")")
        else:
            name = self.expect_ident("lambda parameter").text
        self.expect_op("=>")
        self.skip_nl()
        body = self.parse_expr()
        return A.Lambda(name, body, span=self.span_from(start))

    def parse_args(self) -> tuple[A.Expr, ...]:
        self.expect_op("(")
        args = []
        if not self.tok.is_op(")"):
            while True:
                args.append(self.parse_expr())
                if self.tok.is_op(","):
                    self.advance()
                    continue
                break
        self.expect_op(")")
        return tuple(args)

    def parse_number(self, negative: bool = False, start: Optional[Token] = None) -> A.Literal:
        t = self.advance()
        start = start or t
        span = self.span_from(start)
        text = t.text.replace("_", "")
        sign = "-" if negative else ""
        if t.kind == "INT":
            is_long = text[-1] in "lL"
            digits = text.rstrip("lL")
            value = int(digits, 16 if digits.lower().startswith("0x") else 10)
            value = -value if negative else value
            ty = A.INT64 if is_long else A.INT32
            if not ty.min <= value <= ty.max:
                raise ParseError(f"integer literal {sign}{digits} out of range for {ty}", span,
                                 source_name=self.source_name)
            return A.Literal(value, ty, span=span)
        suffix = text[-1] if text[-1] in "fFdD" else ""
        body = text[:-1] if suffix else text
        fmt = F32 if suffix in ("f", "F") else F64 if suffix in ("d", "D") else self.default_float
        value = parse_hex(sign + body, fmt) if t.kind == "HEXFLOAT" else parse_decimal(sign + body, fmt)
        return A.Literal(value, A.float_type(fmt), span=span)

    def parse_primary(self) -> A.Expr:
        t = self.tok
        if t.kind in ("INT", "FLOAT", "HEXFLOAT"):
            return self.parse_number()
        if t.kind == "KEYWORD" and t.text in ("true", "false"):
            self.advance()
            return A.Literal(t.text == "true", A.BOOL, span=t.span)
        if t.is_op("{"):
            pre, expr = self.parse_block()
            return expr
        if t.is_op("("):
            self.advance()
            items = [self.parse_expr()]
            while self.tok.is_op(","):
                self.advance()
                items.append(self.parse_expr())
            self.expect_op(")")
            if len(items) == 1:
                return items[0]
            return A.TupleExpr(tuple(items), span=self.span_from(t))
        if t.kind == "IDENT":
            return self.parse_identifier()
        if t.kind == "KEYWORD" and t.text == "if":
            return self.parse_expr()
        self.error(f"unexpected {t}", {"expression"})

    def parse_identifier(self) -> A.Expr:
        t = self.advance()
        name = t.text
        if name in ("math", "Math") and self.tok.is_op("."):
            self.advance()
            name = self.expect_ident("math function").text
            if name not in A.MATH_FUNCTIONS and name not in UNARY_BUILTINS | BINARY_BUILTINS:
                self.error(f"unknown math function {name}", set(A.MATH_FUNCTIONS))
            if not self.tok.is_op("("):
                self.error(f"unexpected {self.tok}", {"("})
        if name in ("Double", "Float") and self.tok.is_op("."):
            return self.parse_float_member(t, A.FLOAT64 if name == "Double" else A.FLOAT32)
        if name in ("Int", "Long", "Short", "Byte") and self.tok.is_op("."):
            self.advance()
            m = self.expect_ident("member")
            ty = A.TYPE_NAMES[name]
            if m.text not in ("MaxValue", "MinValue"):
                self.error(f"unknown member {name}.{m.text}", {"MaxValue", "MinValue"}, m)
            return A.Literal(ty.max if m.text == "MaxValue" else ty.min, ty, span=self.span_from(t))
        if name in ("require", "assert", "ensuring"):
            self.error(f"{name} is only allowed as a statement", tok=t)
        type_args: tuple[A.Type, ...] = ()
        if self.tok.is_op("["):
            self.advance()
            targs = [self.parse_type()]
            while self.tok.is_op(","):
                self.advance()
                targs.append(self.parse_type())
            self.expect_op("]")
            type_args = tuple(targs)
            if not self.tok.is_op("("):
                self.error(f"unexpected {self.tok}", {"("})
        if self.tok.is_op("("):
            args = self.parse_args()
            span = self.span_from(t)
            if name in UNARY_BUILTINS:
                self._arity(name, args, 1, t)
                return A.Unary(name, args[0], span=span)
            if name in BINARY_BUILTINS:
                self._arity(name, args, 2, t)
                return A.Binary(name, args[0], args[1], span=span)
            if name in A.MATH_FUNCTIONS:
                self._arity(name, args, A.MATH_FUNCTIONS[name], t)
                return A.MathCall(name, args, span=span)
            return A.Call(name, type_args, args, span=span)
        if self.tok.is_op("=>"):
            self.error("higher-order functions are not supported", tok=self.tok)
        return A.Var(name, span=t.span)

    def _arity(self, name, args, n, tok):
        if len(args) != n:
            raise ParseError(f"{name} expects {n} argument(s), got {len(args)}", tok.span,
                             source_name=self.source_name)

    def parse_float_member(self, start: Token, ty: A.FloatType) -> A.Expr:
        self.advance()
        m = self.expect_ident("member")
        fmt = ty.fmt
        consts = {
            "NaN": math.nan, "PositiveInfinity": math.inf, "NegativeInfinity": -math.inf,
            "MaxValue": fmt.max_finite, "MinValue": -fmt.max_finite,
            "MinPositiveValue": fmt.min_subnormal,
        }
        if m.text in consts:
            return A.Literal(consts[m.text], ty, span=self.span_from(start))
        if m.text == "fromBits":
            args = self.parse_args()
            self._arity("fromBits", args, 1, m)
            return A.FromBits(ty, args[0], span=self.span_from(start))
        self.error(f"unknown member {ty}.{m.text}", set(consts) | {"fromBits"}, m)


@dataclass(frozen=True)
class _Ascribed(A.Expr):
    """``val x: T = e`` before typechecking; removed by the typechecker."""
    expr: A.Expr
    declared: A.Type
    ty: Optional[A.Type] = None
    span: Span = A.NO_SPAN


def parse(source: str, source_name: str = "<input>", default_float: FloatFormat = F64) -> A.Program:
    """Parse FPL source text into an untyped :class:`Program`."""
    return Parser(source, source_name, default_float).parse_program()


def parse_expr(source: str, default_float: FloatFormat = F64) -> A.Expr:
    p = Parser(source, "<expr>", default_float)
    p.skip_newlines()
    e = p.parse_expr()
    p.skip_newlines()
    if p.tok.kind != "EOF":
        p.error(f"unexpected {p.tok}", {"end of input"})
    return e
