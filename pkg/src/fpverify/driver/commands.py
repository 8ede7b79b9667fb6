"""Pipeline orchestration behind the CLI subcommands."""
from __future__ import annotations

import csv
import io
import logging
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from ..checks import CheckConfig
from ..frontend import FrontendError, load
from ..interp import ModelIncomplete, SoundnessError, classify_counterexample
from ..portfolio import (ERROR, INVALID, VALID, NoSolverAvailable, SolverDisagreement, SolverSpec,
                         available, default_solvers, run_solver, solve)
from ..vcgen import UnsupportedConstruct, VerificationCondition, dump_vcs, generate_vcs, prepare
from .report import Report, VCResult, render_value

log = logging.getLogger("fpverify")


@dataclass
class Config:
    solvers: list[SolverSpec] = field(default_factory=default_solvers)
    timeout: float = 300.0
    sequential: bool = False
    jobs: int = 1
    checks: CheckConfig = CheckConfig()
    seed: int = 0
    json_path: Optional[Path] = None
    dump_dir: Optional[Path] = None
    classify: bool = True

    def echo(self) -> dict:
        return {
            "solvers": [s.name for s in self.solvers],
            "timeout": self.timeout,
            "sequential": self.sequential,
            "jobs": self.jobs,
            "seed": self.seed,
            "checks": {
                "nan_checks": self.checks.nan_checks_enabled,
                "cast_checks": self.checks.cast_checks_enabled,
                "suppressed_functions": sorted(self.checks.per_function_suppressions),
                "suppressed_sites": sorted(f"{s.line}:{s.col}" for s in self.checks.per_site_suppressions),
            },
        }


@dataclass
class Unit:
    """One input file after the front half of the pipeline."""
    path: str
    program: object  # prepared program
    vcs: list[VerificationCondition]


def load_units(paths, checks: CheckConfig, first_id: int = 0) -> list[Unit]:
    units, next_id = [], first_id
    for p in paths:
        text = Path(p).read_text(encoding="utf-8")
        typed = load(text, str(p))
        vcs = generate_vcs(typed, checks)
        vcs = [replace(vc, id=next_id + i) for i, vc in enumerate(vcs)]
        next_id += len(vcs)
        units.append(Unit(str(p), prepare(typed, checks), vcs))
    return units


def _verify(unit: Unit, vc: VerificationCondition, config: Config, solvers) -> VCResult:
    v = solve(vc.script, solvers, config.timeout, sequential=config.sequential, vc_id=vc.id)
    res = VCResult(vc.id, unit.path, vc.function, vc.kind, vc.span.line, vc.span.col,
                   v.status, v.solver, v.elapsed, vc.uses_opaque)
    if v.status == ERROR:
        res.trace = [f"{r.solver}: {r.output.strip()[:300]}" for r in v.runs]
    if v.status == INVALID and v.model is not None:
        types = {inp.symbol: inp for inp in vc.script.inputs}
        res.model = {types[s].name: render_value(v.model.get(s, types[s].ty), types[s].ty)
                     for s in types}
        res.filled = list(v.model.filled)
        if config.classify:
            c = classify_counterexample(unit.program, vc, v.model)
            res.classification, res.trace = c.status, c.trace
    return res


def check_command(paths, config: Config) -> tuple[int, Report]:
    report = Report(config.echo())
    try:
        units = load_units(paths, config.checks)
        if config.dump_dir is not None:
            dump_vcs([vc for u in units for vc in u.vcs], config.dump_dir)
        work = [(u, vc) for u in units for vc in u.vcs]
        if not work:
            return report.exit_code, _emit(report, config)
        solvers = available(config.solvers)
        with ThreadPoolExecutor(max_workers=max(1, config.jobs)) as pool:
            report.results = list(pool.map(lambda uv: _verify(uv[0], uv[1], config, solvers), work))
    except (FrontendError, OSError, ValueError, NoSolverAvailable, UnsupportedConstruct,
            SolverDisagreement, SoundnessError, ModelIncomplete) as exc:
        report.errors.append(f"{type(exc).__name__}: {exc}")
    return report.exit_code, _emit(report, config)


def _emit(report: Report, config: Config) -> Report:
    if config.json_path is not None:
        Path(config.json_path).write_text(report.dumps() + "\n", encoding="utf-8")
    return report


# ------------------------------------------------------------------ bench

@dataclass
class BenchRow:
    file: str
    solver: str
    status: str
    times_ms: list[float]

    @property
    def min_ms(self) -> float:
        return min(self.times_ms)

    @property
    def median_ms(self) -> float:
        return statistics.median(self.times_ms)

    @property
    def max_ms(self) -> float:
        return max(self.times_ms)


def _combined_status(statuses: list[str]) -> str:
    definitive = {s for s in statuses if s in (VALID, INVALID)}
    if len(definitive) == 1:
        return definitive.pop()
    if definitive:
        return "inconsistent"
    return max(statuses, key=statuses.count)


def bench_command(vc_dir, solvers: list[SolverSpec], timeout: float = 300.0,
                  repetitions: int = 5) -> list[BenchRow]:
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    rows = []
    for path in sorted(Path(vc_dir).glob("*.smt2")):
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            log.warning("skipping %s: %s", path, exc)
            continue
        for spec in solvers:
            runs = [run_solver(spec, text, timeout) for _ in range(repetitions)]
            rows.append(BenchRow(path.name, spec.name, _combined_status([r.status for r in runs]),
                                 [r.elapsed * 1000 for r in runs]))
    return rows


def bench_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    reps = max((len(r.times_ms) for r in rows), default=0)
    w.writerow(["file", "solver", "status", "min_ms", "median_ms", "max_ms"]
               + [f"run{i}_ms" for i in range(1, reps + 1)])
    for r in rows:
        w.writerow([r.file, r.solver, r.status, f"{r.min_ms:.3f}", f"{r.median_ms:.3f}",
                    f"{r.max_ms:.3f}"] + [f"{t:.3f}" for t in r.times_ms])
    return buf.getvalue()


def file_verdicts(rows: list[BenchRow]) -> dict[str, str]:
    """Portfolio-style verdict per file: any definitive solver answer wins."""
    out: dict[str, list[str]] = {}
    for r in rows:
        out.setdefault(r.file, []).append(r.status)
    return {f: _combined_status(s) for f, s in out.items()}
