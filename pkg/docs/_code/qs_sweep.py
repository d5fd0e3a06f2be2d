from pathlib import Path

from kinkpairs.sweep import (
    OutputFormat,
    SweepConfig,
    emit,
    fit_records,
    run_sweep,
)

cfg = SweepConfig.from_mapping({
    "n_spins": 1000,
    "a_min": 1.0,
    "a_max": 100.0,
    "a_points": 20,
    "methods": ["ClosedForm", "Dephased"],
    "gamma": 1e-3,
    "integrator": "Magnus4",
})
result = run_sweep(cfg)

# Failed points are collected rather than raised.
for failure in result.failures:
    print(failure.method.value, failure.quench_time, failure.message)  # noqa: T201

fits = fit_records(result.records, cfg.effective_fit_window, methods=cfg.methods)
emit(result, fits, OutputFormat.CSV, Path("results"))
