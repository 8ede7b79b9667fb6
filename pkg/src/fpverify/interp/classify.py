"""Concrete re-execution of counterexample models."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from ..frontend import ast as A
from ..portfolio.model import Model, bind_inputs
from .evaluate import Evaluator, Monitor, explode, run_deep
from .values import RuntimeFailure

CONFIRMED, SPURIOUS, UNDETERMINED = "Confirmed", "Spurious", "Undetermined"


class ModelIncomplete(KeyError):
    pass


class SoundnessError(AssertionError):
    """The encoding admitted a model that concrete semantics rejects, with no opaque symbol to blame."""


@dataclass
class Classification:
    status: str
    witness: Optional[bool]  # value of the checked condition; None if never evaluated
    args: dict[str, Any] = field(default_factory=dict)
    trace: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        return self.status


def classify_counterexample(program: A.Program, vc, model: Model) -> Classification:
    """Re-run ``vc``'s function on the model's inputs.

    ``program`` must be the prepared program the VC was generated from
    (checks injected, tuples flattened), as returned by ``vcgen.prepare``.
    """
    fn = program.function(vc.function)
    try:
        args = bind_inputs(model, vc.script.inputs)
    except KeyError as exc:
        raise ModelIncomplete(f"model has no value for {exc.args[0]}") from None
    values = tuple(args[name] for name, _ in fn.params)
    trace = [f"{vc.function}({', '.join(f'{k}={v!r}' for k, v in args.items())})"]

    def spurious(reason: str) -> Classification:
        trace.append(reason)
        if not vc.uses_opaque:
            raise SoundnessError(f"VC {vc.id} ({vc.kind} in {vc.function}): {reason} "
                                 "although the script has no uninterpreted symbols")
        return Classification(SPURIOUS, True, args, trace)

    monitor = None if vc.kind == "postcondition" else Monitor(vc.kind, vc.span)
    ev = Evaluator(program, monitor=monitor)

    def run():
        env: dict[str, Any] = {}
        for (pname, pty), v in zip(fn.params, values):
            explode(pname, v, pty, env)
        if fn.precondition is not None and not ev.eval(fn.precondition, env):
            return "pre", None
        result = ev.call(fn.name, values)
        if vc.kind == "postcondition":
            return "post", ev.postcondition_holds(fn, env, result)
        return "site", result

    try:
        stage, outcome = run_deep(run)
    except RuntimeFailure as exc:
        trace.append(f"runtime failure: {exc}")
        if monitor is not None and False in monitor.observed:
            # the violated condition was seen before the failure it predicts
            return Classification(CONFIRMED, False, args, trace)
        return Classification(UNDETERMINED, None, args, trace)
    if stage == "pre":
        return spurious("precondition is false on the model")
    if stage == "post":
        trace.append(f"postcondition evaluates to {outcome}")
        return Classification(CONFIRMED, False, args, trace) if not outcome \
            else spurious("postcondition holds concretely")
    observed = monitor.observed
    trace.append(f"{vc.kind} at {vc.span} observed {observed}")
    if False in observed:
        return Classification(CONFIRMED, False, args, trace)
    if not observed:
        return spurious("obligation site not reached")
    return spurious("condition holds concretely")
