from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ast import Span


class FrontendError(Exception):
    pass


class ParseError(FrontendError):
    def __init__(self, message: str, span: Span, expected: frozenset[str] = frozenset(),
                 source_name: str = "<input>"):
        self.message = message
        self.span = span
        self.expected = expected
        self.source_name = source_name
        super().__init__(self.render())

    def render(self) -> str:
        exp = ""
        if self.expected:
            exp = " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        return f"{self.source_name}:{self.span.line}:{self.span.col}: parse-error: {self.message}{exp}"


@dataclass(frozen=True)
class Diagnostic:
    """One typechecking problem.

    ``kind`` is one of ``type-mismatch``, ``unknown-identifier``,
    ``fp-modulo-unsupported``, ``noeq-violation``, ``missing-contract``,
    ``duplicate-definition``, ``unsupported``.
    """
    kind: str
    message: str
    span: Span
    hint: Optional[str] = None

    def render(self, source_name: str = "<input>") -> str:
        text = f"{source_name}:{self.span.line}:{self.span.col}: {self.kind}: {self.message}"
        if self.hint:
            text += f" (hint: {self.hint})"
        return text


class TypeCheckError(FrontendError):
    def __init__(self, diagnostics: list[Diagnostic], source_name: str = "<input>"):
        self.diagnostics = list(diagnostics)
        self.source_name = source_name
        super().__init__("\n".join(d.render(source_name) for d in self.diagnostics))

    @property
    def kinds(self) -> list[str]:
        return [d.kind for d in self.diagnostics]
