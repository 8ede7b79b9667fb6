"""Verification-condition generation.

Each function is encoded once.  Every obligation met during the pre-order
walk is recorded with the lengths of the declaration and assertion lists at
that moment, so its script contains exactly the definitions it depends on.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..checks import CheckConfig, inject_checks
from ..frontend import ast as A
from .encode import Encoder, Frame, neg
from .flatten import flatten_tuples
from .smt import InputSymbol, SmtScript

KINDS = ("postcondition", "callPrecondition", "nanCheck", "castNaN", "castRange",
         "intDivByZero", "userAssert")


@dataclass(frozen=True)
class VerificationCondition:
    id: int
    function: str
    kind: str
    span: A.Span
    script: SmtScript
    uses_opaque: bool

    @property
    def usesOpaque(self) -> bool:
        return self.uses_opaque

    @property
    def filename(self) -> str:
        return f"{self.function}_{self.kind}_{self.id}.smt2"

    def text(self) -> str:
        return self.script.text()


@dataclass
class _Pending:
    kind: str
    span: A.Span
    goal: Optional[str] = None
    path: tuple[str, ...] = ()
    n_decls: int = 0
    n_asserts: int = 0


class _FunctionVCs:
    def __init__(self, program: A.Program, fn: A.FunctionDef):
        self.fn = fn
        self.pending: list[_Pending] = []
        self.seen: set[tuple[str, A.Span]] = set()
        self.enc = Encoder(program, on_obligation=self.callback)

    def callback(self, action, *args):
        if action == "reserve":
            kind, span = args
            if (kind, span) in self.seen:
                return None
            self.seen.add((kind, span))
            self.pending.append(_Pending(kind, span))
            return self.pending[-1]
        slot, goal, path, nd, na = args
        slot.goal, slot.path, slot.n_decls, slot.n_asserts = goal, path, nd, na

    def run(self) -> list[_Pending]:
        fn, enc = self.fn, self.enc
        scope = {}
        self.inputs = []
        for name, ty in fn.params:
            sym = enc.const(f"p.{name}", enc.sort(ty, Frame({})))
            scope[name] = sym
            self.inputs.append(InputSymbol(name, sym, ty))
        self.pre = "true"
        if fn.precondition is not None:
            self.pre = enc.term(fn.precondition, Frame(dict(scope), emit=False))
        results = enc.terms(fn.body, Frame(dict(scope)))
        if fn.postcondition is not None:
            post = fn.postcondition
            pscope = dict(scope)
            if len(results) == 1:
                pscope[post.param] = results[0]
            else:
                pscope.update({f"{post.param}__{i}": r for i, r in enumerate(results, 1)})
            goal = enc.term(post.body, Frame(pscope, emit=False))
            self.pending.append(_Pending("postcondition", post.span, goal, (),
                                         len(enc.declarations), len(enc.assertions)))
        return self.pending

    def script(self, p: _Pending) -> tuple[SmtScript, bool]:
        enc = self.enc
        decls = tuple(enc.declarations[:p.n_decls])
        uses_uf = any(i < p.n_decls for i in enc.uf_marks)
        opaque = any(i < p.n_decls for i in enc.opaque_marks)
        asserts = list(enc.assertions[:p.n_asserts])
        if self.pre != "true":
            asserts.append(f"(assert {self.pre})")
        asserts.extend(f"(assert {c})" for c in p.path if c != "true")
        asserts.append(f"(assert {neg(p.goal)})")
        header = f"{self.fn.name} {p.kind} at {p.span.line}:{p.span.col}"
        logic = "QF_UFBVFP" if uses_uf else "QF_BVFP"
        return SmtScript(logic, decls, tuple(asserts), inputs=tuple(self.inputs), header=header), opaque


def prepare(program: A.Program, checks: Optional[CheckConfig] = CheckConfig()) -> A.Program:
    """Inject checks (unless ``checks`` is None) and flatten tuples."""
    if checks is not None:
        program = inject_checks(program, checks)
    return flatten_tuples(program)


def generate_vcs(program: A.Program, checks: Optional[CheckConfig] = CheckConfig(),
                 functions: Optional[list[str]] = None) -> list[VerificationCondition]:
    """One VC per obligation and per postcondition, in definition order."""
    program = prepare(program, checks)
    out: list[VerificationCondition] = []
    for fn in program.functions:
        if functions is not None and fn.name not in functions:
            continue
        gen = _FunctionVCs(program, fn)
        for p in gen.run():
            if p.goal is None:
                continue
            script, opaque = gen.script(p)
            out.append(VerificationCondition(len(out), fn.name, p.kind, p.span, script, opaque))
    return out


def encode_expr(expr: A.Expr, env: dict[str, str], program: A.Program = A.Program()) -> str:
    """SMT term for ``expr`` with free variables mapped through ``env``.

    Auxiliary declarations are discarded; use :func:`generate_vcs` for
    self-contained scripts.
    """
    return Encoder(program).term(expr, Frame(dict(env), emit=False))


def dump_vcs(vcs: list[VerificationCondition], directory) -> list[Path]:
    d = Path(directory)
    try:
        d.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {d}: {exc.strerror}") from exc
    paths = []
    for vc in vcs:
        p = d / vc.filename
        try:
            p.write_text(vc.text(), encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write {p}: {exc.strerror}") from exc
        paths.append(p)
    return paths


def contract_script(contract) -> SmtScript:
    """All axioms of one math contract at a free call site; satisfiable iff the contract is consistent."""
    enc = Encoder(A.Program())
    ty = A.float_type(contract.precision)
    scope = {p: enc.const(f"p.{p}", enc.sort(ty, Frame({}))) for p in contract.params}
    call = A.MathCall(contract.function, tuple(A.Var(p, ty=ty) for p in contract.params), ty=ty)
    enc.term(call, Frame(scope, emit=False))
    inputs = tuple(InputSymbol(p, scope[p], ty) for p in contract.params)
    return SmtScript("QF_UFBVFP", tuple(enc.declarations), tuple(enc.assertions), inputs=inputs,
                     header=f"{contract.function} {contract.precision.name} contract consistency")
