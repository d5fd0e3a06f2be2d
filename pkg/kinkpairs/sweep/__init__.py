"""Quench-time sweeps, power-law fits and result files."""

from .config import OutputFormat, SweepConfig, log_spaced
from .emit import CSV_COLUMNS, emit, read_records_csv, write_failures
from .fit import PowerLawFit, fit_power_law, fit_records
from .runner import SweepFailure, SweepRecord, SweepResult, run_sweep

__all__ = [
    "CSV_COLUMNS",
    "OutputFormat",
    "PowerLawFit",
    "SweepConfig",
    "SweepFailure",
    "SweepRecord",
    "SweepResult",
    "emit",
    "fit_power_law",
    "fit_records",
    "log_spaced",
    "read_records_csv",
    "run_sweep",
    "write_failures",
]
