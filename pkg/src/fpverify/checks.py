"""Automatic safety obligations.

Every comparison with a floating operand is wrapped in ``Checked(("nanCheck",), cmp)``
and every float-to-integer cast in ``Checked(("castNaN", "castRange"), cast)``.
The wrapper carries no runtime meaning; vcgen turns it into VCs and the
interpreter ignores it unless asked to monitor one site.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .frontend import ast as A

NAN_CHECK = ("nanCheck",)
CAST_CHECKS = ("castNaN", "castRange")


@dataclass(frozen=True)
class CheckConfig:
    nan_checks_enabled: bool = True
    cast_checks_enabled: bool = True
    per_function_suppressions: frozenset[str] = frozenset()
    per_site_suppressions: frozenset[A.Span] = frozenset()


def is_float_comparison(e: A.Expr) -> bool:
    return (isinstance(e, A.Binary) and e.op in A.COMPARE_OPS
            and (isinstance(e.lhs.ty, A.FloatType) or isinstance(e.rhs.ty, A.FloatType)))


def is_float_to_int_cast(e: A.Expr) -> bool:
    return isinstance(e, A.Cast) and isinstance(e.target, A.IntType) and isinstance(e.operand.ty, A.FloatType)


def _sites(program: A.Program) -> set[A.Span]:
    out = set()
    for fn in program.functions:
        for node in A.function_exprs(fn):
            if is_float_comparison(node) or is_float_to_int_cast(node):
                out.add(node.span)
    return out


def validate_config(program: A.Program, config: CheckConfig) -> None:
    """Reject suppressions naming functions or sites absent from ``program``."""
    names = set(program.names())
    unknown = sorted(set(config.per_function_suppressions) - names)
    if unknown:
        raise ValueError(f"suppression names unknown function(s): {', '.join(unknown)}")
    bad = sorted(set(config.per_site_suppressions) - _sites(program))
    if bad:
        raise ValueError("suppression names no comparison or cast site at " + ", ".join(map(str, bad)))


def _inject(e: A.Expr, config: CheckConfig) -> A.Expr:
    if isinstance(e, A.Checked):
        return replace(e, node=A.map_children(e.node, lambda c: _inject(c, config)))
    e = A.map_children(e, lambda c: _inject(c, config))
    if e.span in config.per_site_suppressions:
        return e
    if config.nan_checks_enabled and is_float_comparison(e):
        return A.Checked(NAN_CHECK, e, ty=e.ty, span=e.span)
    if config.cast_checks_enabled and is_float_to_int_cast(e):
        return A.Checked(CAST_CHECKS, e, ty=e.ty, span=e.span)
    return e


def inject_checks(program: A.Program, config: CheckConfig = CheckConfig()) -> A.Program:
    """Attach NaN and cast obligations to function bodies.

    Contracts are specifications and receive no checks. Injection is
    idempotent: already wrapped nodes are left alone.
    """
    validate_config(program, config)
    fns = []
    for fn in program.functions:
        if fn.unchecked or fn.name in config.per_function_suppressions:
            fns.append(fn)
        else:
            fns.append(replace(fn, body=_inject(fn.body, config)))
    return replace(program, functions=tuple(fns))


def strip_checks(e: A.Expr) -> A.Expr:
    e = A.map_children(e, strip_checks)
    return e.node if isinstance(e, A.Checked) else e


def count_obligations(program: A.Program) -> dict[str, int]:
    counts = {"nanCheck": 0, "castNaN": 0, "castRange": 0}
    for fn in program.functions:
        for node in A.walk(fn.body):
            if isinstance(node, A.Checked):
                for k in node.kinds:
                    counts[k] += 1
    return counts
