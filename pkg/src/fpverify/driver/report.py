"""Report assembly, rendering and the JSON schema."""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Optional

from ..floats import hex_repr, shortest_repr
from ..frontend import ast as A
from ..portfolio import INVALID, TIMEOUT, UNKNOWN, VALID, ERROR

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_INVALID, EXIT_INCONCLUSIVE, EXIT_TOOL_ERROR = 0, 1, 2, 3
NAN_NOTE = "SMT-LIB has a single NaN; payload bits are not modelled"


def render_value(value, ty: A.Type) -> dict[str, Any]:
    if isinstance(ty, A.FloatType):
        out = {"decimal": shortest_repr(value, ty.fmt), "hex": hex_repr(value)}
        if math.isnan(value):
            out["note"] = NAN_NOTE
        return out
    if isinstance(ty, A.IntType):
        return {"decimal": str(value), "hex": hex(value & ((1 << ty.bits) - 1))}
    if isinstance(ty, A.BoolType):
        return {"decimal": "true" if value else "false", "hex": None}
    return {"decimal": str(value), "hex": None}


@dataclass
class VCResult:
    id: int
    file: str
    function: str
    kind: str
    line: int
    col: int
    status: str
    solver: str
    elapsed_ms: float
    uses_opaque: bool
    model: Optional[dict[str, dict]] = None
    filled: list[str] = field(default_factory=list)
    classification: Optional[str] = None
    trace: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "id": self.id, "file": self.file, "function": self.function, "kind": self.kind,
            "span": {"line": self.line, "col": self.col}, "status": self.status,
            "solver": self.solver, "elapsed_ms": round(self.elapsed_ms, 3),
            "uses_opaque": self.uses_opaque, "model": self.model, "defaulted_inputs": self.filled,
            "classification": self.classification, "trace": self.trace,
        }


@dataclass
class Report:
    config: dict[str, Any]
    results: list[VCResult] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    def summary(self) -> dict[str, int]:
        c = Counter(r.status for r in self.results)
        return {s: c.get(s, 0) for s in (VALID, INVALID, UNKNOWN, TIMEOUT, ERROR)}

    @property
    def exit_code(self) -> int:
        if self.errors:
            return EXIT_TOOL_ERROR
        return exit_code_for(r.status for r in self.results)

    def by_function(self) -> list[dict]:
        groups: dict[tuple[str, str], list[VCResult]] = {}
        for r in sorted(self.results, key=lambda r: r.id):
            groups.setdefault((r.file, r.function), []).append(r)
        return [{"file": f, "function": fn, "vcs": [r.to_json() for r in rs]}
                for (f, fn), rs in groups.items()]

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "functions": self.by_function(),
            "summary": self.summary(),
            "errors": list(self.errors),
            "exit_code": self.exit_code,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False)

    def render(self) -> str:
        lines = []
        for r in sorted(self.results, key=lambda r: r.id):
            where = f"{r.file}:{r.line}:{r.col}"
            extra = f" [{r.classification}]" if r.classification else ""
            solver = f" ({r.solver}, {r.elapsed_ms:.0f} ms)" if r.solver else ""
            lines.append(f"{where}: {r.function}: {r.kind}: {r.status}{solver}{extra}")
            for name, v in (r.model or {}).items():
                hexpart = f"  ({v['hex']})" if v.get("hex") and v["hex"] != v["decimal"] else ""
                note = "  [defaulted]" if name in r.filled else ""
                lines.append(f"    {name} = {v['decimal']}{hexpart}{note}")
        lines.extend(f"error: {e}" for e in self.errors)
        s = self.summary()
        lines.append(", ".join(f"{v} {k}" for k, v in s.items()) + f" ({len(self.results)} VCs)")
        return "\n".join(lines)


def exit_code_for(statuses) -> int:
    """0 all valid, 1 any invalid, 3 any solver error, 2 otherwise inconclusive."""
    seen = set(statuses)
    if INVALID in seen:
        return EXIT_INVALID
    if ERROR in seen:
        return EXIT_TOOL_ERROR
    if seen & {UNKNOWN, TIMEOUT}:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def schema() -> dict:
    text = resources.files(__package__).joinpath("report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
