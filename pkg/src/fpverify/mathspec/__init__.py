from .contracts import FUNCTIONS, Clause, MathContract, SpecialRow, UnknownFunction, all_contracts, contract_for
from .eft import fast_two_sum
from .fuzz import FuzzReport, Violation, fuzz_contract

__all__ = ["FUNCTIONS", "Clause", "MathContract", "SpecialRow", "UnknownFunction", "all_contracts",
           "contract_for", "fast_two_sum", "FuzzReport", "Violation", "fuzz_contract"]
