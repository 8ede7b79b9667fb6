"""Fake solver executables for portfolio tests."""
from __future__ import annotations

import stat
import sys
from pathlib import Path

from fpverify.portfolio import SolverSpec

_TEMPLATES = {
    # fails everything, including the probe
    "error": 'import sys\nsys.stdin.read()\nprint("(error \\"stub\\")")\nsys.exit(1)\n',
    # answers the probe but errors on anything mentioning floating point
    "fp_error": ('import sys\ntext = sys.stdin.read()\n'
                 'print("(error \\"no FP\\")" if "FloatingPoint" in text else "sat")\n'),
    "sleep": 'import sys, time\ntext = sys.stdin.read()\n'
             'if "BitVec 4" in text:\n    print("sat"); sys.exit()\ntime.sleep(60)\n',
    "unknown": 'import sys\ntext = sys.stdin.read()\nprint("sat" if "BitVec 4" in text else "unknown")\n',
    "liar": 'import sys\ntext = sys.stdin.read()\nprint("sat" if "BitVec 4" in text else "unsat")\n',
}


def make_stub(tmp: Path, kind: str) -> SolverSpec:
    path = tmp / f"stub_{kind}.py"
    path.write_text(_TEMPLATES[kind])
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return SolverSpec(f"stub-{kind}", sys.executable, (str(path),))
