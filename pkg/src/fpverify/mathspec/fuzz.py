"""Stratified fuzzing of math contracts against the host library."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..floats import F32, FloatFormat, round_to
from . import vectorized
from .contracts import MathContract
from .hostmath import host_function

SUBNORMAL_SHARE = 0.10
PI_MULTIPLES = 200  # k * pi/2 for k = 1..200 covers the first 100 multiples of pi


@dataclass
class Violation:
    inputs: tuple[float, ...]
    observed: float
    clause: str


@dataclass
class FuzzReport:
    function: str
    precision: str
    samples: int
    seed: int
    violations: list[Violation] = field(default_factory=list)
    violation_count: int = 0

    @property
    def passed(self) -> bool:
        return self.violation_count == 0


def _uint(fmt: FloatFormat):
    return np.uint32 if fmt is F32 else np.uint64


def _float(fmt: FloatFormat):
    return np.float32 if fmt is F32 else np.float64


def stratified(n: int, fmt: FloatFormat, rng: np.random.Generator) -> np.ndarray:
    """``n`` finite floats with the binade chosen uniformly and
    ``SUBNORMAL_SHARE`` of the draws forced into the subnormal range."""
    max_exp = (1 << fmt.ebits) - 2
    exps = rng.integers(1, max_exp + 1, size=n, dtype=np.uint64)
    sub = rng.random(n) < SUBNORMAL_SHARE
    exps[sub] = 0
    mant = rng.integers(0, 1 << (fmt.sbits - 1), size=n, dtype=np.uint64)
    sign = rng.integers(0, 2, size=n, dtype=np.uint64)
    # a zero significand in the subnormal binade would be a zero, not a subnormal
    mant[sub & (mant == 0)] = 1
    bits = (sign << np.uint64(fmt.width - 1)) | (exps << np.uint64(fmt.sbits - 1)) | mant
    return bits.astype(_uint(fmt)).view(_float(fmt))


def special_grid(fmt: FloatFormat) -> np.ndarray:
    base = [0.0, math.inf, math.nan, 1.0, fmt.min_subnormal, fmt.max_finite, fmt.min_normal]
    base += [round_to(k * math.pi / 2, fmt) for k in range(1, PI_MULTIPLES + 1)]
    vals = []
    for v in base:
        vals.extend([v, -v] if not math.isnan(v) else [v])
    return np.array(vals, dtype=_float(fmt))


def draw_inputs(arity: int, n: int, fmt: FloatFormat, seed: int) -> list[np.ndarray]:
    rng = np.random.Generator(np.random.PCG64(seed))
    grid = special_grid(fmt)
    if arity == 1:
        return [np.concatenate([grid, stratified(n, fmt, rng)])]
    gx, gy = np.meshgrid(grid, grid, indexing="ij")
    return [np.concatenate([gx.ravel(), stratified(n, fmt, rng)]),
            np.concatenate([gy.ravel(), stratified(n, fmt, rng)])]


def host_oracle(contract: MathContract) -> Callable[..., float]:
    return host_function(contract.function, contract.precision, contract.arity)


def apply_oracle(oracle: Callable[..., float], inputs: list[np.ndarray], fmt: FloatFormat) -> np.ndarray:
    cols = [a.tolist() for a in inputs]
    if len(cols) == 1:
        out = [oracle(x) for x in cols[0]]
    else:
        out = [oracle(x, y) for x, y in zip(*cols)]
    return np.array(out, dtype=_float(fmt))


def check_clauses(contract: MathContract, inputs: list[np.ndarray], results: np.ndarray,
                  include_disabled: bool = False, limit: int = 1000) -> tuple[list[Violation], int]:
    env = dict(zip(contract.params, inputs))
    env["r"] = results
    violations: list[Violation] = []
    total = 0
    for clause in contract.axioms(include_disabled):
        ok = np.asarray(vectorized.evaluate(clause.expr, env), dtype=bool)
        if ok.shape == ():
            ok = np.full(results.shape, bool(ok))
        bad = np.flatnonzero(~ok)
        total += len(bad)
        for i in bad[: max(0, limit - len(violations))]:
            violations.append(Violation(tuple(float(a[i]) for a in inputs), float(results[i]), clause.name))
    return violations, total


def fuzz_contract(contract: MathContract, oracle: Optional[Callable[..., float]] = None,
                  n: int = 10 ** 6, seed: int = 0, include_disabled: bool = False) -> FuzzReport:
    """Check every clause of ``contract`` on ``n`` stratified draws plus the special-value grid."""
    if n < 1:
        raise ValueError("n must be at least 1")
    fmt = contract.precision
    inputs = draw_inputs(contract.arity, n, fmt, seed)
    results = apply_oracle(oracle or host_oracle(contract), inputs, fmt)
    violations, total = check_clauses(contract, inputs, results, include_disabled)
    return FuzzReport(contract.function, fmt.name, len(results), seed, violations, total)
