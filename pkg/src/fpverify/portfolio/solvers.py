"""Solver processes and the portfolio race."""
from __future__ import annotations

import os
import queue
import shutil
import subprocess
import sys
import threading
import time
from dataclasses import dataclass, field
from typing import Optional

from ..vcgen.smt import SmtScript
from .model import Model, ModelParseError, complete, parse_model

VALID, INVALID, UNKNOWN, TIMEOUT, ERROR = "valid", "invalid", "unknown", "timeout", "error"
STATUSES = (VALID, INVALID, UNKNOWN, TIMEOUT, ERROR)
_STRENGTH = {UNKNOWN: 3, TIMEOUT: 2, ERROR: 1}
ALL_THEORIES = frozenset({"FP", "BV", "UF"})
# grace period before the host kills a solver that ignores its own limit
KILL_GRACE = 2.0
PROBE_SCRIPT = "(set-logic QF_BV)\n(declare-const a (_ BitVec 4))\n(assert (= a #x1))\n(check-sat)\n"


class NoSolverAvailable(RuntimeError):
    pass


class SolverDisagreement(RuntimeError):
    def __init__(self, message: str, transcripts: dict[str, str]):
        self.transcripts = transcripts
        super().__init__(message)


@dataclass(frozen=True)
class SolverSpec:
    name: str
    executable: str
    args: tuple[str, ...] = ()  # "{timeout}" and "{timeout_ms}" are substituted
    theories: frozenset[str] = ALL_THEORIES

    def command(self, timeout: float) -> list[str]:
        subst = {"timeout": str(max(1, int(round(timeout)))), "timeout_ms": str(int(timeout * 1000))}
        return [self.executable] + [a.format(**subst) for a in self.args]

    def supports(self, script: SmtScript) -> bool:
        return logic_theories(script.logic) <= self.theories


def logic_theories(logic: str) -> frozenset[str]:
    body = logic[3:] if logic.startswith("QF_") else logic
    out = set()
    for tag, theory in (("UF", "UF"), ("BV", "BV"), ("FP", "FP")):
        if tag in body:
            out.add(theory)
    return frozenset(out)


_SHIM = (sys.executable, "-m", "fpverify.solvershim")
_ENV = {"z3": "FPVERIFY_Z3", "cvc5": "FPVERIFY_CVC5", "bitwuzla": "FPVERIFY_BITWUZLA"}
# argument templates when the named solver is a native binary
_BINARY_ARGS = {
    "z3": ("-in", "-smt2", "-T:{timeout}"),
    "cvc5": ("--lang=smt2", "--tlimit-per={timeout_ms}"),
    "bitwuzla": ("--lang", "smt2", "--time-limit-per={timeout_ms}"),
}
DEFAULT_ORDER = ("bitwuzla", "cvc5", "z3")


def spec_for(name: str, path: Optional[str] = None) -> SolverSpec:
    """Solver ``name`` at ``path``; without a path, the environment override,
    then a binary on PATH, then the bundled Python-binding shim."""
    path = path or os.environ.get(_ENV.get(name, ""), "") or None
    if path is None:
        found = shutil.which(name)
        if found is None and name in ("cvc5", "bitwuzla"):
            return SolverSpec(name, _SHIM[0], _SHIM[1:] + (name, "--timeout", "{timeout}"))
        path = found or name
    return SolverSpec(name, path, _BINARY_ARGS.get(name, ()))


def default_solvers() -> list[SolverSpec]:
    return [spec_for(n) for n in DEFAULT_ORDER]


def parse_solver_list(text: str) -> list[SolverSpec]:
    """``name[:path],...`` as accepted by ``--solvers``."""
    out = []
    for item in filter(None, (t.strip() for t in text.split(","))):
        name, _, path = item.partition(":")
        out.append(spec_for(name, path or None))
    if not out:
        raise ValueError("empty solver list")
    return out


@dataclass
class RunResult:
    solver: str
    status: str
    output: str
    elapsed: float  # seconds
    model: Optional[Model] = None


@dataclass
class Verdict:
    vc_id: Optional[int]
    status: str
    model: Optional[Model] = None
    solver: str = ""
    elapsed: float = 0.0  # milliseconds
    runs: list[RunResult] = field(default_factory=list)


class _Process:
    def __init__(self, spec: SolverSpec, text: str, timeout: float):
        self.spec = spec
        self.text = text
        self.timeout = timeout
        self.proc: Optional[subprocess.Popen] = None
        self.cancelled = threading.Event()

    def run(self) -> RunResult:
        start = time.monotonic()
        try:
            self.proc = subprocess.Popen(self.spec.command(self.timeout), stdin=subprocess.PIPE,
                                         stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
        except OSError as exc:
            return RunResult(self.spec.name, ERROR, str(exc), time.monotonic() - start)
        if self.cancelled.is_set():
            self.kill()
        timed_out = False
        try:
            out, err = self.proc.communicate(self.text, timeout=self.timeout + KILL_GRACE)
        except subprocess.TimeoutExpired:
            timed_out = True
            self.kill()
            out, err = self.proc.communicate()
        except (BrokenPipeError, OSError):
            out, err = "", "broken pipe"
        elapsed = time.monotonic() - start
        if timed_out:
            return RunResult(self.spec.name, TIMEOUT, out or "", elapsed)
        return interpret(self.spec.name, out or "", err or "", elapsed, self.timeout)

    def kill(self) -> None:
        self.cancelled.set()
        if self.proc is not None and self.proc.poll() is None:
            try:
                self.proc.kill()
            except OSError:
                pass


def interpret(solver: str, out: str, err: str, elapsed: float, timeout: float) -> RunResult:
    lines = [ln.strip() for ln in out.splitlines() if ln.strip()]
    first = lines[0] if lines else ""
    transcript = out + (("\n" + err) if err else "")
    if first == "unsat":
        return RunResult(solver, VALID, transcript, elapsed)
    if first == "sat":
        rest = out.split("sat", 1)[1]
        try:
            model = parse_model(rest)
        except ModelParseError as exc:
            return RunResult(solver, ERROR, f"{transcript}\n{exc}", elapsed)
        return RunResult(solver, INVALID, transcript, elapsed, model)
    if first == "timeout" or (first == "unknown" and elapsed >= 0.95 * timeout):
        return RunResult(solver, TIMEOUT, transcript, elapsed)
    if first == "unknown":
        return RunResult(solver, UNKNOWN, transcript, elapsed)
    return RunResult(solver, ERROR, transcript, elapsed)


_probe_cache: dict[SolverSpec, bool] = {}
_probe_lock = threading.Lock()


def probe(spec: SolverSpec, timeout: float = 30.0) -> bool:
    """Whether ``spec`` answers a trivial satisfiable script with ``sat``."""
    with _probe_lock:
        if spec in _probe_cache:
            return _probe_cache[spec]
    ok = _Process(spec, PROBE_SCRIPT, timeout).run().output.strip().startswith("sat")
    with _probe_lock:
        _probe_cache[spec] = ok
    return ok


def available(solvers: list[SolverSpec]) -> list[SolverSpec]:
    """The solvers that pass the probe; NoSolverAvailable if none do."""
    if not solvers:
        raise NoSolverAvailable("no solver configured")
    ok = [s for s in solvers if probe(s)]
    if not ok:
        names = ", ".join(s.name for s in solvers)
        raise NoSolverAvailable(f"no configured solver answered the probe ({names})")
    return ok


def _aggregate(runs: list[RunResult], vc_id) -> Verdict:
    definitive = [r for r in runs if r.status in (VALID, INVALID)]
    if definitive:
        first = definitive[0]
        clash = [r for r in definitive if r.status != first.status]
        if clash:
            raise SolverDisagreement(
                f"{first.solver} says {first.status} but {clash[0].solver} says {clash[0].status}",
                {r.solver: r.output for r in definitive})
        return Verdict(vc_id, first.status, first.model, first.solver, first.elapsed * 1000, runs)
    if not runs:
        return Verdict(vc_id, ERROR, runs=runs)
    best = max(runs, key=lambda r: _STRENGTH[r.status])
    last = max(r.elapsed for r in runs)
    return Verdict(vc_id, best.status, None, best.solver, last * 1000, runs)


def solve(script: SmtScript, solvers: list[SolverSpec], timeout: float = 300.0, *,
          sequential: bool = False, cross_check: bool = False, vc_id=None) -> Verdict:
    """Race ``solvers`` on ``script``; the first definitive answer wins.

    With ``sequential`` the solvers run one at a time in the given order.
    With ``cross_check`` every solver runs to completion and a valid/invalid
    disagreement raises :class:`SolverDisagreement`.
    """
    usable = [s for s in available(solvers) if s.supports(script)]
    if not usable:
        return Verdict(vc_id, ERROR, solver="", runs=[
            RunResult(s.name, ERROR, f"logic {script.logic} not supported", 0.0) for s in solvers])
    text = script.text()
    runs: list[RunResult] = []
    if sequential:
        for spec in usable:
            r = _Process(spec, text, timeout).run()
            runs.append(r)
            if r.status in (VALID, INVALID) and not cross_check:
                break
        return _finish(_aggregate(runs, vc_id), script)

    procs = [_Process(s, text, timeout) for s in usable]
    results: "queue.Queue[RunResult]" = queue.Queue()
    threads = [threading.Thread(target=lambda p=p: results.put(p.run()), daemon=True) for p in procs]
    for t in threads:
        t.start()
    for _ in procs:
        r = results.get()
        runs.append(r)
        if r.status in (VALID, INVALID) and not cross_check:
            for p in procs:
                p.kill()
            break
    for t in threads:
        t.join()
    # answers that arrived while the losers were being killed still count for disagreement
    while not results.empty():
        late = results.get()
        if late.status in (VALID, INVALID):
            runs.append(late)
    return _finish(_aggregate(runs, vc_id), script)


def _finish(verdict: Verdict, script: SmtScript) -> Verdict:
    if verdict.model is not None:
        complete(verdict.model, script.inputs)
    return verdict


def run_solver(spec: SolverSpec, text: str, timeout: float) -> RunResult:
    """One solver on raw script text, without the probe."""
    return _Process(spec, text, timeout).run()
