from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import Span
from .errors import ParseError

KEYWORDS = {"def", "val", "if", "else", "true", "false"}

# longest operators first
OPERATORS = [
    "=>", "<=", ">=", "==", "!=", "&&", "||",
    "+", "-", "*", "/", "%", "<", ">", "!", "=",
    "(", ")", "[", "]", "{", "}", ",", ":", ";", ".", "@",
]

_HEX_FLOAT = re.compile(r"0[xX](?:[0-9a-fA-F]+(?:\.[0-9a-fA-F]*)?|\.[0-9a-fA-F]+)[pP][+-]?\d+[fFdD]?")
_HEX_INT = re.compile(r"0[xX][0-9a-fA-F]+[lL]?")
_DEC_FLOAT = re.compile(r"\d+(?:_\d+)*(?:\.\d+(?:_\d+)*(?:[eE][+-]?\d+)?|[eE][+-]?\d+)[fFdD]?|\d+[fFdD]")
_DEC_INT = re.compile(r"\d+(?:_\d+)*[lL]?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, KEYWORD, INT, FLOAT, HEXFLOAT, OP, NEWLINE, EOF
    text: str
    span: Span

    def is_op(self, *ops: str) -> bool:
        return self.kind == "OP" and self.text in ops

    def __str__(self) -> str:
        return "end of input" if self.kind == "EOF" else repr(self.text)


def tokenize(source: str, source_name: str = "<input>") -> list[Token]:
    """Split FPL source into tokens.

    Newlines are significant only outside parentheses and brackets; the
    parser decides whether a NEWLINE ends a statement.
    """
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    nesting: list[str] = []  # open brackets; newlines count only at top level or inside {}
    n = len(source)

    def emit(kind, text, l0, c0):
        tokens.append(Token(kind, text, Span(l0, c0, line, col)))

    while i < n:
        ch = source[i]
        if ch == "\n":
            if (not nesting or nesting[-1] == "{") and tokens and tokens[-1].kind != "NEWLINE":
                tokens.append(Token("NEWLINE", "\n", Span(line, col, line, col + 1)))
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
                col += 1
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end < 0:
                raise ParseError("unterminated comment", Span(line, col), source_name=source_name)
            chunk = source[i:end + 2]
            nl = chunk.count("\n")
            if nl:
                line += nl
                col = len(chunk) - chunk.rfind("\n")
            else:
                col += len(chunk)
            i = end + 2
            continue
        l0, c0 = line, col
        for kind, rx in (("HEXFLOAT", _HEX_FLOAT), ("INT", _HEX_INT), ("FLOAT", _DEC_FLOAT), ("INT", _DEC_INT)):
            if ch.isdigit() or (kind == "HEXFLOAT" and ch == "0"):
                m = rx.match(source, i)
                if m:
                    text = m.group(0)
                    i += len(text)
                    col += len(text)
                    emit(kind, text, l0, c0)
                    break
        else:
            m = _IDENT.match(source, i)
            if m:
                text = m.group(0)
                i += len(text)
                col += len(text)
                emit("KEYWORD" if text in KEYWORDS else "IDENT", text, l0, c0)
                continue
            for op in OPERATORS:
                if source.startswith(op, i):
                    i += len(op)
                    col += len(op)
                    emit("OP", op, l0, c0)
                    if op in ("(", "[", "{"):
                        nesting.append(op)
                    elif op in (")", "]", "}") and nesting:
                        nesting.pop()
                    break
            else:
                raise ParseError(f"unexpected character {ch!r}", Span(line, col), source_name=source_name)
            continue
        if i < n and (source[i].isalnum() or source[i] == "_"):
            raise ParseError("malformed number literal", Span(l0, c0), source_name=source_name)
    tokens.append(Token("EOF", "", Span(line, col, line, col)))
    return tokens
