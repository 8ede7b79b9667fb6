"""Random opaque-free FPL programs for differential testing.

Programs are emitted as source text so the whole front end is exercised.
Integer divisors are built as ``abs(e) + 1``, which is never zero under
wrapping arithmetic, so evaluation cannot fail on division.
"""
from __future__ import annotations

import random

F64_LITS = ["0.0", "(-0.0)", "1.0", "(-1.0)", "0.1", "2.5", "1.0e308", "(-1.0e308)", "4.9e-324",
            "2.2250738585072014e-308", "Double.NaN", "Double.PositiveInfinity",
            "Double.NegativeInfinity", "3.0", "1.0e-300", "9007199254740993.0"]
F32_LITS = ["0.0f", "(-0.0f)", "1.0f", "0.1f", "(-2.5f)", "3.4e38f", "1.4e-45f", "Float.NaN",
            "Float.PositiveInfinity", "16777217.0f", "1.0e-30f"]
INT_LITS = ["0", "1", "(-1)", "7", "100", "2147483647", "(-2147483648)", "65536"]

PARAMS = {"Double": ["a", "b"], "Float": ["c"], "Int": ["i", "j"]}
_TYPE_OF = {p: t for t, ps in PARAMS.items() for p in ps}


class ProgramGenerator:
    def __init__(self, seed: int, max_depth: int = 3, closed: bool = False):
        self.rng = random.Random(seed)
        self.max_depth = max_depth
        self.closed = closed
        self.used: set[str] = set()
        self.lets: dict[str, list[str]] = {"Double": [], "Float": [], "Int": []}

    def leaf(self, ty: str) -> str:
        r = self.rng
        names = ([] if self.closed else PARAMS[ty]) + self.lets[ty]
        if names and r.random() < 0.6:
            name = r.choice(names)
            self.used.add(name)
            return name
        return r.choice({"Double": F64_LITS, "Float": F32_LITS, "Int": INT_LITS}[ty])

    def num(self, ty: str, depth: int) -> str:
        r = self.rng
        if depth >= self.max_depth or r.random() < 0.25:
            return self.leaf(ty)
        d = depth + 1
        if ty == "Int":
            k = r.randrange(5)
            if k == 0:
                return f"({self.num('Int', d)} {r.choice('+-*')} {self.num('Int', d)})"
            if k == 1:
                return f"({self.num('Int', d)} {r.choice('/%')} (abs({self.num('Int', d)}) + 1))"
            if k == 2:
                src = r.choice(["Double", "Float"])
                return f"{self._wrap(self.num(src, d))}.toInt"
            if k == 3:
                src = r.choice(["Double", "Float"])
                narrow = r.choice(["toByte", "toShort"])
                return f"{self._wrap(self.num(src, d))}.{narrow}.toInt"
            return f"(if ({self.cond(d)}) {self.num('Int', d)} else {self.num('Int', d)})"
        k = r.randrange(8)
        if k <= 2:
            return f"({self.num(ty, d)} {r.choice('+-*/')} {self.num(ty, d)})"
        if k == 3:
            return f"{r.choice(['abs', 'sqrt', 'floor', 'ceil', 'rint'])}({self.num(ty, d)})"
        if k == 4:
            return f"{r.choice(['min', 'max'])}({self.num(ty, d)}, {self.num(ty, d)})"
        if k == 5:
            other = "Float" if ty == "Double" else "Double"
            src = r.choice(["Int", other])
            return f"{self._wrap(self.num(src, d))}.to{ty}"
        if k == 6:
            return f"(-{self._wrap(self.num(ty, d))})"
        return f"(if ({self.cond(d)}) {self.num(ty, d)} else {self.num(ty, d)})"

    def cond(self, depth: int) -> str:
        r = self.rng
        ty = r.choice(["Double", "Float", "Int"])
        k = r.randrange(4)
        if k == 0 and ty != "Int":
            return f"{self._wrap(self.num(ty, depth + 1))}.{r.choice(['isNaN', 'isInfinite', 'isFinite', 'isPositiveSign'])}"
        if k == 1 and depth < self.max_depth:
            return f"({self.cond(depth + 1)} {r.choice(['&&', '||'])} {self.cond(depth + 1)})"
        op = r.choice(["<", "<=", ">", ">=", "==", "!="])
        return f"({self.num(ty, depth + 1)} {op} {self.num(ty, depth + 1)})"

    @staticmethod
    def _wrap(text: str) -> str:
        return text if text.replace("_", "").replace(".", "").isalnum() and not text[0].isdigit() else f"({text})"

    def postcondition(self, ty: str) -> str:
        r = self.rng
        if ty == "Int":
            return r.choice(["r >= 0", "r != 0", "r < 1000", "r == r", "r > (-5)"])
        zero = "0.0" if ty == "Double" else "0.0f"
        return r.choice([f"!r.isNaN", f"r >= {zero} || r.isNaN", "r == r", "r.isFinite",
                         f"r.isNaN || r <= {zero} || r > {zero}", "!r.isInfinite",
                         "r.isPositiveSign || r.isNaN"])

    def program(self, name: str = "f") -> str:
        r = self.rng
        ty = r.choice(["Double", "Double", "Float", "Int"])
        lines = []
        for n in range(r.randrange(3)):
            lty = r.choice(["Double", "Float", "Int"])
            lines.append(f"  val v{n} = {self.num(lty, 1)}")
            self.lets[lty].append(f"v{n}")
        body = self.num(ty, 0)
        req = None
        if r.random() < 0.3 and not self.closed:
            p = r.choice(["a", "b", "c"])
            self.used.add(p)
            req = r.choice([f"{p}.isFinite", f"!{p}.isNaN", f"{p} > 0.0" if p != "c" else f"{p} > 0.0f"])
        params = [p for t in ("Double", "Float", "Int") for p in PARAMS[t] if p in self.used]
        sig = ", ".join(f"{p}: {_TYPE_OF[p]}" for p in params)
        out = [f"def {name}({sig}): {ty} = {{"]
        if req:
            out.append(f"  require({req})")
        out.extend(lines)
        out.append(f"  {body}")
        post = self.postcondition(ty) if r.random() < 0.8 else None
        return "\n".join(out) + "\n}" + (f".ensuring(r => {post})" if post else "")


def random_program(seed: int, max_depth: int = 3) -> str:
    return ProgramGenerator(seed, max_depth).program()


def random_closed_expr(seed: int, max_depth: int = 3) -> tuple[str, str]:
    """A closed numeric expression and its type name."""
    g = ProgramGenerator(seed, max_depth, closed=True)
    ty = g.rng.choice(["Double", "Float", "Int"])
    return g.num(ty, 0), ty
