"""Untyped and typed syntax trees for FPL.

A single set of node classes serves both stages: the parser leaves ``ty`` as
``None`` and the typechecker fills it in.  Spans never take part in equality,
so a re-parsed pretty-printed program compares equal to the original.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Iterator, Optional, Union

from ..floats import F32, F64, FloatFormat


@dataclass(frozen=True, order=True)
class Span:
    line: int
    col: int
    end_line: int = 0
    end_col: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"

    @property
    def start(self) -> tuple[int, int]:
        return (self.line, self.col)


NO_SPAN = Span(0, 0)


def _span_field():
    return field(default=NO_SPAN, compare=False, repr=False)


# --------------------------------------------------------------------- types

class Type:
    is_float = False
    is_int = False


@dataclass(frozen=True)
class FloatType(Type):
    fmt: FloatFormat
    is_float = True

    def __str__(self) -> str:
        return "Double" if self.fmt is F64 else "Float"


@dataclass(frozen=True)
class IntType(Type):
    bits: int
    is_int = True

    @property
    def min(self) -> int:
        return -(1 << (self.bits - 1))

    @property
    def max(self) -> int:
        return (1 << (self.bits - 1)) - 1

    def wrap(self, n: int) -> int:
        n &= (1 << self.bits) - 1
        return n - (1 << self.bits) if n >> (self.bits - 1) else n

    def __str__(self) -> str:
        return {8: "Byte", 16: "Short", 32: "Int", 64: "Long"}[self.bits]


@dataclass(frozen=True)
class BoolType(Type):
    def __str__(self) -> str:
        return "Boolean"


@dataclass(frozen=True)
class TupleType(Type):
    items: tuple[Type, ...]

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("tuple arity must be at least 2")

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.items)) + ")"


@dataclass(frozen=True)
class TypeVar(Type):
    name: str
    noeq: bool = False

    def __str__(self) -> str:
        return self.name


FLOAT32 = FloatType(F32)
FLOAT64 = FloatType(F64)
INT8, INT16, INT32, INT64 = (IntType(b) for b in (8, 16, 32, 64))
BOOL = BoolType()

TYPE_NAMES = {
    "Double": FLOAT64, "Float64": FLOAT64,
    "Float": FLOAT32, "Float32": FLOAT32,
    "Byte": INT8, "Int8": INT8,
    "Short": INT16, "Int16": INT16,
    "Int": INT32, "Int32": INT32,
    "Long": INT64, "Int64": INT64,
    "Boolean": BOOL, "Bool": BOOL,
}


def float_type(fmt: FloatFormat) -> FloatType:
    return FLOAT64 if fmt is F64 else FLOAT32


def substitute(ty: Type, mapping: dict[str, Type]) -> Type:
    if isinstance(ty, TypeVar):
        return mapping.get(ty.name, ty)
    if isinstance(ty, TupleType):
        return TupleType(tuple(substitute(t, mapping) for t in ty.items))
    return ty


def scalar_types(ty: Type) -> list[Type]:
    if isinstance(ty, TupleType):
        return [s for t in ty.items for s in scalar_types(t)]
    return [ty]


# --------------------------------------------------------------- expressions

UNARY_OPS = frozenset({
    "neg", "not", "abs", "sqrt", "ceil", "floor", "rint",
    "isNaN", "isFinite", "isInfinite", "isPositiveSign", "toBits",
})
ARITH_OPS = frozenset({"+", "-", "*", "/", "%"})
COMPARE_OPS = frozenset({"<", "<=", ">", ">=", "==", "!="})
ORDER_OPS = frozenset({"<", "<=", ">", ">="})
LOGIC_OPS = frozenset({"&&", "||"})
BINARY_OPS = ARITH_OPS | COMPARE_OPS | LOGIC_OPS | {"min", "max"}

MATH_FUNCTIONS = {
    "cos": 1, "sin": 1, "tan": 1, "asin": 1, "acos": 1, "atan": 1,
    "atan2": 2, "hypot": 2, "cbrt": 1, "pow": 2, "exp": 1, "expm1": 1,
    "log": 1, "log1p": 1, "log10": 1, "sinh": 1, "cosh": 1, "tanh": 1,
}


class Expr:
    ty: Optional[Type]
    span: Span

    def children(self) -> Iterator["Expr"]:
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, Expr):
                yield v
            elif isinstance(v, tuple):
                yield from (x for x in v if isinstance(x, Expr))

    def with_type(self, ty: Type) -> "Expr":
        return replace(self, ty=ty)


@dataclass(frozen=True)
class Literal(Expr):
    value: Union[float, int, bool]
    ty: Optional[Type] = None
    span: Span = _span_field()

    def __eq__(self, other):
        # floats compare by bit identity so that -0.0 != 0.0 and NaN == NaN
        if not isinstance(other, Literal) or self.ty != other.ty:
            return False
        a, b = self.value, other.value
        if isinstance(a, float) and isinstance(b, float):
            from ..floats import same_value
            return same_value(a, b)
        return type(a) is type(b) and a == b

    def __hash__(self):
        return hash((repr(self.value), self.ty))


@dataclass(frozen=True)
class Var(Expr):
    name: str
    ty: Optional[Type] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class Let(Expr):
    name: str
    value: Expr
    body: Expr
    ty: Optional[Type] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class If(Expr):
    cond: Expr
    then: Expr
    orelse: Expr
    ty: Optional[Type] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    operand: Expr
    ty: Optional[Type] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    lhs: Expr
    rhs: Expr
    ty: Optional[Type] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class Cast(Expr):
    target: Type
    operand: Expr
    implicit: bool = field(default=False, compare=False)
    ty: Optional[Type] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class FromBits(Expr):
    target: FloatType
    operand: Expr
    ty: Optional[Type] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class Call(Expr):
    func: str
    type_args: tuple[Type, ...]
    args: tuple[Expr, ...]
    component: Optional[int] = None  # set by tuple flattening
    ty: Optional[Type] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class MathCall(Expr):
    func: str
    args: tuple[Expr, ...]
    ty: Optional[Type] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class TupleExpr(Expr):
    items: tuple[Expr, ...]
    ty: Optional[Type] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class Proj(Expr):
    tuple: Expr
    index: int  # 1-based, as in ``t._1``
    ty: Optional[Type] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class Assert(Expr):
    cond: Expr
    body: Expr
    ty: Optional[Type] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class Checked(Expr):
    """An injected safety obligation guarding a comparison or cast node.

    ``kinds`` is ``("nanCheck",)`` for comparisons and a subset of
    ``("castNaN", "castRange")`` for float-to-integer casts.
    """
    kinds: tuple[str, ...]
    node: Expr
    ty: Optional[Type] = None
    span: Span = _span_field()


# ----------------------------------------------------------------- programs

@dataclass(frozen=True)
class Lambda:
    param: str
    body: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class FunctionDef:
    name: str
    type_params: tuple[TypeVar, ...]
    params: tuple[tuple[str, Type], ...]
    result: Optional[Type]
    body: Expr
    precondition: Optional[Expr] = None
    postcondition: Optional[Lambda] = None
    opaque: bool = False
    unchecked: bool = False
    span: Span = _span_field()

    @property
    def param_names(self) -> list[str]:
        return [p for p, _ in self.params]


@dataclass(frozen=True)
class Program:
    functions: tuple[FunctionDef, ...] = ()
    source_name: str = field(default="<input>", compare=False)

    def function(self, name: str) -> FunctionDef:
        for f in self.functions:
            if f.name == name:
                return f
        raise KeyError(name)

    def names(self) -> list[str]:
        return [f.name for f in self.functions]


TypedProgram = Program  # a Program whose every node carries a resolved type


def walk(expr: Expr) -> Iterator[Expr]:
    """Pre-order traversal."""
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(list(node.children())))


def map_children(expr: Expr, fn) -> Expr:
    """Rebuild ``expr`` with ``fn`` applied to each direct child expression."""
    changes = {}
    for f in fields(expr):
        v = getattr(expr, f.name)
        if isinstance(v, Expr):
            changes[f.name] = fn(v)
        elif isinstance(v, tuple) and v and isinstance(v[0], Expr):
            changes[f.name] = tuple(fn(x) for x in v)
    return replace(expr, **changes) if changes else expr


def function_exprs(fn: FunctionDef) -> Iterator[Expr]:
    if fn.precondition is not None:
        yield from walk(fn.precondition)
    yield from walk(fn.body)
    if fn.postcondition is not None:
        yield from walk(fn.postcondition.body)
