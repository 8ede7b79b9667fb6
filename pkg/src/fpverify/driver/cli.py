"""``fpverify`` command line."""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from ..checks import CheckConfig
from ..floats import F32, F64, hex_repr, parse_decimal, parse_hex, shortest_repr
from ..frontend import FrontendError, ast as A, load
from ..frontend.ast import Span
from ..interp import ContractViolation, RuntimeFailure, evaluate
from ..mathspec import FUNCTIONS, contract_for, fuzz_contract
from ..portfolio import NoSolverAvailable, default_solvers, parse_solver_list
from ..vcgen import dump_vcs, generate_vcs
from .commands import Config, bench_command, bench_csv, check_command
from .report import EXIT_TOOL_ERROR


def parse_value(text: str, ty: A.Type):
    t = text.strip()
    if isinstance(ty, A.FloatType):
        low = t.lower().lstrip("+")
        if low in ("nan", "-nan"):
            return math.nan
        if low in ("inf", "infinity"):
            return math.inf
        if low in ("-inf", "-infinity"):
            return -math.inf
        t = t.rstrip("fFdD") if not low.startswith(("0x", "-0x")) else t
        return parse_hex(t, ty.fmt) if "0x" in low else parse_decimal(t, ty.fmt)
    if isinstance(ty, A.IntType):
        return int(t.rstrip("lL"), 0)
    if isinstance(ty, A.BoolType):
        if t not in ("true", "false"):
            raise ValueError(f"not a Boolean: {text!r}")
        return t == "true"
    raise ValueError(f"cannot pass a {ty} on the command line")


def format_value(v, ty: A.Type) -> str:
    if isinstance(ty, A.FloatType):
        dec, hx = shortest_repr(v, ty.fmt), hex_repr(v)
        return dec if dec == hx else f"{dec} ({hx})"
    if isinstance(ty, A.TupleType):
        return "(" + ", ".join(format_value(x, t) for x, t in zip(v, ty.items)) + ")"
    if isinstance(ty, A.BoolType):
        return "true" if v else "false"
    return str(v)


def _site(text: str) -> Span:
    line, _, col = text.partition(":")
    return Span(int(line), int(col))


def _check_config(args) -> CheckConfig:
    return CheckConfig(
        nan_checks_enabled=not args.no_nan_checks,
        cast_checks_enabled=not args.no_cast_checks,
        per_function_suppressions=frozenset(args.suppress or ()),
        per_site_suppressions=frozenset(_site(s) for s in args.suppress_site or ()),
    )


def _solvers(args):
    return parse_solver_list(args.solvers) if args.solvers else default_solvers()


def cmd_check(args) -> int:
    config = Config(solvers=_solvers(args), timeout=args.timeout, sequential=args.sequential,
                    jobs=args.jobs, checks=_check_config(args), seed=args.seed,
                    json_path=args.json, dump_dir=args.dump_vcs, classify=not args.no_classify)
    code, report = check_command(args.files, config)
    print(report.render())
    return code


def cmd_dump(args) -> int:
    checks = _check_config(args)
    count = 0
    for f in args.files:
        vcs = generate_vcs(load(Path(f).read_text(encoding="utf-8"), f), checks)
        paths = dump_vcs(vcs, args.out)
        count += len(paths)
        for p in paths:
            print(p)
    print(f"{count} VC file(s) written to {args.out}", file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    prog = load(Path(args.file).read_text(encoding="utf-8"), args.file)
    fn = prog.function(args.function)
    raw = [a for a in args.args.split(",")] if args.args else []
    if len(raw) != len(fn.params):
        print(f"error: {fn.name} expects {len(fn.params)} argument(s), got {len(raw)}", file=sys.stderr)
        return EXIT_TOOL_ERROR
    values = [parse_value(r, t) for r, (_, t) in zip(raw, fn.params)]
    try:
        out = evaluate(prog, fn.name, values, check_contracts=args.check_contracts,
                       max_depth=args.max_depth)
    except ContractViolation as exc:
        print(f"contract violation: {exc}")
        return 1
    except RuntimeFailure as exc:
        print(f"runtime failure: {exc}")
        return 1
    print(format_value(out, fn.result))
    return 0


def cmd_fuzz(args) -> int:
    fmt = F32 if args.precision == 32 else F64
    names = (args.functions or []) + (args.extra_functions or []) or list(FUNCTIONS)
    reports = []
    for name in names:
        r = fuzz_contract(contract_for(name, fmt), n=args.samples, seed=args.seed,
                          include_disabled=args.include_disabled)
        reports.append(r)
        status = "ok" if r.passed else f"{r.violation_count} violation(s)"
        print(f"{name:6s} {fmt.name}: {r.samples} samples, {status}")
        for v in r.violations[:args.show]:
            print(f"    {v.clause}: f{v.inputs} = {v.observed!r}")
    print(f"seed {args.seed}")
    if args.json:
        data = {"seed": args.seed, "precision": fmt.name, "samples": args.samples,
                "functions": [{"function": r.function, "samples": r.samples,
                               "violations": r.violation_count} for r in reports]}
        Path(args.json).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    return 0 if all(r.passed for r in reports) else 1


def cmd_bench(args) -> int:
    rows = bench_command(args.directory, _solvers(args), args.timeout, args.reps)
    text = bench_csv(rows)
    if args.csv:
        Path(args.csv).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _add_check_flags(p) -> None:
    p.add_argument("--no-nan-checks", action="store_true", help="do not inject NaN comparison checks")
    p.add_argument("--no-cast-checks", action="store_true", help="do not inject float-to-int cast checks")
    p.add_argument("--suppress", action="append", metavar="FUNCTION",
                   help="no automatic checks in FUNCTION (repeatable)")
    p.add_argument("--suppress-site", action="append", metavar="LINE:COL",
                   help="no automatic check at LINE:COL (repeatable)")


def _add_solver_flags(p) -> None:
    p.add_argument("--solvers", metavar="NAME[:PATH],...",
                   help="solver portfolio (default: bitwuzla,cvc5,z3)")
    p.add_argument("--timeout", type=float, default=300.0, metavar="SECONDS")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fpverify", description="Verify floating-point FPL programs.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify contracts and injected checks")
    p.add_argument("files", nargs="+")
    _add_solver_flags(p)
    _add_check_flags(p)
    p.add_argument("--sequential", action="store_true", help="run solvers one after another")
    p.add_argument("--jobs", type=int, default=1, help="VCs solved concurrently")
    p.add_argument("--json", type=Path, metavar="PATH", help="write the JSON report here")
    p.add_argument("--dump-vcs", type=Path, metavar="DIR", help="also write each VC as .smt2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-classify", action="store_true", help="skip counterexample re-execution")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("dump-vcs", help="write VCs as SMT-LIB files without solving")
    p.add_argument("files", nargs="+")
    p.add_argument("--out", type=Path, required=True, metavar="DIR")
    _add_check_flags(p)
    p.set_defaults(run=cmd_dump)

    p = sub.add_parser("eval", help="run a function on concrete arguments")
    p.add_argument("file")
    p.add_argument("function")
    p.add_argument("--args", default="", help="comma-separated argument values")
    p.add_argument("--check-contracts", action="store_true")
    p.add_argument("--max-depth", type=int, default=10 ** 6)
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("fuzz", help="test math contracts against the host library")
    p.add_argument("functions", nargs="*", metavar="FUNCTION")
    p.add_argument("--precision", type=int, choices=(32, 64), default=64)
    p.add_argument("--function", action="append", dest="extra_functions", metavar="FUNCTION",
                   help="function to fuzz (repeatable; same as the positional form)")
    p.add_argument("-n", "--n", "--samples", dest="samples", type=int, default=10 ** 6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--include-disabled", action="store_true")
    p.add_argument("--show", type=int, default=5, help="violations printed per function")
    p.add_argument("--json", type=Path, metavar="PATH")
    p.set_defaults(run=cmd_fuzz)

    p = sub.add_parser("bench", help="time solvers on a directory of .smt2 files")
    p.add_argument("directory")
    _add_solver_flags(p)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--csv", type=Path, metavar="PATH")
    p.set_defaults(run=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.run(args)
    except (FrontendError, NoSolverAvailable, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOOL_ERROR


if __name__ == "__main__":
    sys.exit(main())
