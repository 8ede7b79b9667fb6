from .encode import Encoder, UnsupportedConstruct
from .flatten import flatten_tuples
from .generate import (KINDS, VerificationCondition, contract_script, dump_vcs, encode_expr,
                       generate_vcs, prepare)
from .smt import InputSymbol, SmtScript

__all__ = ["Encoder", "UnsupportedConstruct", "flatten_tuples", "KINDS", "VerificationCondition",
           "contract_script", "dump_vcs", "encode_expr", "generate_vcs", "prepare", "InputSymbol", "SmtScript"]
