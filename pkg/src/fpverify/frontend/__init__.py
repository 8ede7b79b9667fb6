from .ast import Program, TypedProgram, Span
from .errors import Diagnostic, FrontendError, ParseError, TypeCheckError
from .parser import parse, parse_expr
from .printer import print_expr, print_program
from .typecheck import typecheck


def load(source: str, source_name: str = "<input>") -> TypedProgram:
    """Parse and typecheck in one step."""
    return typecheck(parse(source, source_name))


__all__ = ["Program", "TypedProgram", "Span", "Diagnostic", "FrontendError", "ParseError",
           "TypeCheckError", "parse", "parse_expr", "print_expr", "print_program", "typecheck", "load"]
