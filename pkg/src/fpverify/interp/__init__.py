from .classify import (CONFIRMED, SPURIOUS, UNDETERMINED, Classification, ModelIncomplete,
                       SoundnessError, classify_counterexample)
from .evaluate import ContractViolation, Evaluator, Monitor, evaluate
from .values import DivisionByZero, RuntimeFailure

__all__ = ["CONFIRMED", "SPURIOUS", "UNDETERMINED", "Classification", "ModelIncomplete",
           "SoundnessError", "classify_counterexample", "ContractViolation", "Evaluator", "Monitor",
           "evaluate", "DivisionByZero", "RuntimeFailure"]
