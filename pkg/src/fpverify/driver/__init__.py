from .commands import BenchRow, Config, bench_command, bench_csv, check_command, file_verdicts
from .report import (EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, EXIT_TOOL_ERROR, Report, VCResult,
                     exit_code_for, schema)

__all__ = ["BenchRow", "Config", "bench_command", "bench_csv", "check_command", "file_verdicts",
           "EXIT_INCONCLUSIVE", "EXIT_INVALID", "EXIT_OK", "EXIT_TOOL_ERROR", "Report", "VCResult",
           "exit_code_for", "schema"]
