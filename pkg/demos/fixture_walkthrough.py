"""Verify each bundled fixture, show the counterexample, then verify its repair.

    python demos/fixture_walkthrough.py [--solvers bitwuzla]
"""
import argparse
from importlib import resources

from fpverify.driver import Config, check_command
from fpverify.portfolio import available, default_solvers, parse_solver_list

PAIRS = [("stormday", "stormday_fixed"), ("gradient", "gradient_fixed"), ("limit", "limit_fixed")]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--solvers")
    ap.add_argument("--timeout", type=float, default=300)
    args = ap.parse_args()
    solvers = available(parse_solver_list(args.solvers) if args.solvers else default_solvers())
    print("solvers:", ", ".join(s.name for s in solvers))
    fixtures = resources.files("fpverify") / "fixtures"
    for broken, fixed in PAIRS:
        for name in (broken, fixed):
            path = str(fixtures / f"{name}.fpl")
            print(f"\n=== {name}\n{(fixtures / f'{name}.fpl').read_text().strip()}\n")
            code, report = check_command([path], Config(solvers=solvers, timeout=args.timeout))
            print(report.render())
            print(f"exit code {code}")


if __name__ == "__main__":
    main()
