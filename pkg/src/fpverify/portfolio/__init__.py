from .model import Model, ModelParseError, bind_inputs, complete, default_value, parse_model
from .solvers import (DEFAULT_ORDER, ERROR, INVALID, STATUSES, TIMEOUT, UNKNOWN, VALID,
                      NoSolverAvailable, RunResult, SolverDisagreement, SolverSpec, Verdict,
                      available, default_solvers, parse_solver_list, probe, run_solver, solve,
                      spec_for)

__all__ = ["Model", "ModelParseError", "bind_inputs", "complete", "default_value", "parse_model", "DEFAULT_ORDER", "ERROR",
           "INVALID", "STATUSES", "TIMEOUT", "UNKNOWN", "VALID", "NoSolverAvailable", "RunResult",
           "SolverDisagreement", "SolverSpec", "Verdict", "available", "default_solvers",
           "parse_solver_list", "probe", "run_solver", "solve", "spec_for"]
