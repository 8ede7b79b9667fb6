"""Why an invalid VC is not always a bug.

``sin`` is abstracted by its contract, which only bounds the result to
[-1, 1].  A postcondition that depends on the actual value of ``sin(0.5)``
is therefore unprovable, and the solver picks some value in range.
Replaying the model on the interpreter, which calls the real ``sin``,
shows the postcondition holds: the counterexample is spurious.
"""
from importlib import resources

from fpverify.frontend import load
from fpverify.interp import classify_counterexample, evaluate
from fpverify.portfolio import available, default_solvers, solve
from fpverify.vcgen import generate_vcs, prepare

source = (resources.files("fpverify") / "fixtures" / "spurious_sin.fpl").read_text()
print(source)
program = load(source)
solvers = available(default_solvers())

for vc in generate_vcs(program):
    verdict = solve(vc.script, solvers, 60)
    print(f"{vc.kind:>14}: {verdict.status} ({verdict.solver}), opaque={vc.uses_opaque}")
    if verdict.status != "invalid":
        continue
    for sym, val in sorted(verdict.model.values.items()):
        print(f"    {sym} = {val!r}")
    c = classify_counterexample(prepare(program), vc, verdict.model)
    print(f"    replay: {c.status}")
    for line in c.trace:
        print("     ", line)

fn = program.functions[0]
args = [0.5] * len(fn.params)
print(f"\nconcrete {fn.name}{tuple(args)} = {evaluate(program, fn.name, args)}")
