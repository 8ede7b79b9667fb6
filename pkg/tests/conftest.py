import os
import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from fpverify.frontend import load  # noqa: E402
from fpverify.portfolio import NoSolverAvailable, available, default_solvers, spec_for  # noqa: E402

FIXTURES = Path(str(resources.files("fpverify") / "fixtures"))


def fixture_source(name: str) -> str:
    return (FIXTURES / f"{name}.fpl").read_text()


def fixture_program(name: str):
    return load(fixture_source(name), f"{name}.fpl")


@pytest.fixture(scope="session")
def solvers():
    try:
        return available(default_solvers())
    except NoSolverAvailable as exc:
        pytest.skip(str(exc))


@pytest.fixture(scope="session")
def fast_solver():
    """A single quick-starting solver for bulk checks."""
    for name in ("bitwuzla", "z3", "cvc5"):
        try:
            return available([spec_for(name)])[0]
        except NoSolverAvailable:
            continue
    pytest.skip("no SMT solver available")


# ------------------------------------------------ acceptance summary lines

_criteria: dict[int, tuple[str, str]] = {}


def _criterion(nodeid: str):
    name = nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return None
    parts = name.split("_", 3)
    return int(parts[2]), parts[3] if len(parts) > 3 else ""


def pytest_runtest_logreport(report):
    c = _criterion(report.nodeid)
    if c is None:
        return
    num, title = c
    if report.when == "call" or (report.when == "setup" and not report.passed):
        outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        _criteria[num] = (title.replace("_", " "), outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, outcome = _criteria[num]
        terminalreporter.write_line(f"criterion {num:2d} {outcome}: {title}")
