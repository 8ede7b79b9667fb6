"""Command-line front for solvers that ship only as Python bindings.

``python3 -m fpverify.solvershim cvc5|bitwuzla [--timeout SECONDS]``
reads an SMT-LIB script on stdin and prints the solver's responses.
"""
from __future__ import annotations

import argparse
import sys


def run_cvc5(text: str, timeout: float) -> None:
    import cvc5

    tm = cvc5.TermManager()
    solver = cvc5.Solver(tm)
    if timeout:
        solver.setOption("tlimit-per", str(int(timeout * 1000)))
    sm = cvc5.SymbolManager(tm)
    parser = cvc5.InputParser(solver, sm)
    parser.setStringInput(cvc5.InputLanguage.SMT_LIB_2_6, text, "stdin")
    last = None
    while True:
        cmd = parser.nextCommand()
        if cmd.isNull():
            break
        name = str(cmd).split()[0].strip("()")
        if name == "get-model" and last != "sat":
            continue
        out = cmd.invoke(solver, sm)
        if out:
            sys.stdout.write(out if out.endswith("\n") else out + "\n")
            sys.stdout.flush()
        if name == "check-sat":
            last = out.strip()


def run_bitwuzla(text: str, timeout: float) -> None:
    import bitwuzla as bz

    tm = bz.TermManager()
    opts = bz.Options()
    opts.set(bz.Option.PRODUCE_MODELS, True)
    if timeout:
        opts.set(bz.Option.TIME_LIMIT_PER, int(timeout * 1000))
    parser = bz.Parser(tm, opts)
    parser.parse(text, False, False)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="fpverify-shim")
    ap.add_argument("solver", choices=["cvc5", "bitwuzla"])
    ap.add_argument("--timeout", type=float, default=0.0)
    ap.add_argument("--version", action="store_true")
    args = ap.parse_args(argv)
    try:
        if args.version:
            mod = __import__(args.solver)
            print(args.solver, getattr(mod, "__version__", "unknown"))
            return 0
        text = sys.stdin.read()
        (run_cvc5 if args.solver == "cvc5" else run_bitwuzla)(text, args.timeout)
    except ImportError as exc:
        print(f'(error "{args.solver} bindings unavailable: {exc}")')
        return 1
    except Exception as exc:  # solver-side parse or logic errors
        msg = str(exc).replace('"', "'")
        print(f'(error "{msg}")')
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
