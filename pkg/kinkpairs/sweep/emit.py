"""
Writing and reading sweep results.

CSV is the canonical record format. Floats are written with repr so a CSV read
back gives bit-identical values. The JSON document carries the effective
configuration, the records, the fits and the failures:

    {
        "config": {...},
        "config_hash": "...",
        "records": [{"A", "method", "kappa1", ..., "kappa3_T", "gamma",
                     "config_hash", "started_at", "finished_at"}, ...],
        "fits": [{"q", "method", "exponent", "amplitude", "stderr",
                  "window": [A_lo, A_hi]}, ...],
        "failures": [{"A", "method", "error", "message"}, ...]
    }
"""

import csv
import json
import logging
from pathlib import Path
from typing import Callable, Dict, List, Sequence, TextIO

from kinkpairs.backends import Method
from kinkpairs.exceptions import ConfigurationError, OutputError

from .config import OutputFormat
from .fit import PowerLawFit
from .runner import SweepFailure, SweepRecord, SweepResult

LOGGER = logging.getLogger(__name__)

CSV_COLUMNS = (
    "A",
    "method",
    "kappa1",
    "kappa2",
    "kappa3",
    "kappa1_T",
    "kappa2_T",
    "kappa3_T",
    "gamma",
    "config_hash",
)
PMF_COLUMNS = ("n", "P")
FIT_COLUMNS = ("q", "method", "exponent", "amplitude", "stderr", "window_lo", "window_hi")
FAILURES_FILE = "failures.json"


def record_row(record: SweepRecord) -> Dict[str, object]:
    """
    The CSV fields of a record.

    :param record: the record.
    :returns: column name to value.
    """
    kappa1_t, kappa2_t, kappa3_t = record.total_kink_cumulants
    return {
        "A": record.quench_time,
        "method": record.method.value,
        "kappa1": record.kappa1,
        "kappa2": record.kappa2,
        "kappa3": record.kappa3,
        "kappa1_T": kappa1_t,
        "kappa2_T": kappa2_t,
        "kappa3_T": kappa3_t,
        "gamma": record.gamma,
        "config_hash": record.config_hash,
    }


def _format(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records_csv(records: Sequence[SweepRecord], stream: TextIO) -> None:
    """
    Write records as CSV to an open text stream.

    :param records: the records.
    :param stream: a writable text stream.
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        row = record_row(record)
        writer.writerow([_format(row[column]) for column in CSV_COLUMNS])


def write_fits_csv(fits: Sequence[PowerLawFit], stream: TextIO) -> None:
    """
    Write fits as CSV to an open text stream.

    :param fits: the fits.
    :param stream: a writable text stream.
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(FIT_COLUMNS)
    for fit in fits:
        low, high = fit.window
        writer.writerow([
            fit.q, fit.method.value, repr(fit.exponent), repr(fit.amplitude),
            repr(fit.stderr), repr(low), repr(high),
        ])


def read_records_csv(path: Path) -> List[SweepRecord]:
    """
    Parse records from an emitted CSV file.

    :param path: the CSV file.
    :returns: the records, without PMFs or timestamps.
    :raises OutputError: the file cannot be read.
    :raises ConfigurationError: the file is not a records CSV.
    """
    try:
        with open(path, newline="", encoding="utf-8") as stream:
            rows = list(csv.DictReader(stream))
    except OSError as error:
        raise OutputError(f"Cannot read records ({error.strerror})", str(path)) from error

    records = []
    for line, row in enumerate(rows, start=2):
        if set(row) != set(CSV_COLUMNS):
            raise ConfigurationError(f"{path} does not have the record columns")
        try:
            records.append(SweepRecord(
                quench_time=float(row["A"]),
                method=Method(row["method"]),
                kappa1=float(row["kappa1"]),
                kappa2=float(row["kappa2"]),
                kappa3=float(row["kappa3"]),
                gamma=float(row["gamma"]),
                config_hash=row["config_hash"],
            ))
        except ValueError as error:
            raise ConfigurationError(f"{path}, line {line}: {error}") from error
    return records


def fit_entry(fit: PowerLawFit) -> Dict[str, object]:
    """
    The JSON form of a fit.

    :param fit: the fit.
    :returns: a JSON-ready mapping.
    """
    return {
        "q": fit.q,
        "method": fit.method.value,
        "exponent": fit.exponent,
        "amplitude": fit.amplitude,
        "stderr": fit.stderr,
        "window": list(fit.window),
    }


def failure_entry(failure: SweepFailure) -> Dict[str, object]:
    """
    The JSON form of a failure.

    :param failure: the failure.
    :returns: a JSON-ready mapping.
    """
    return {
        "A": failure.quench_time,
        "method": failure.method.value,
        "error": failure.error,
        "message": failure.message,
    }


def result_document(
    result: SweepResult,
    fits: Sequence[PowerLawFit],
) -> Dict[str, object]:
    """
    The JSON document of a sweep.

    :param result: the sweep result.
    :param fits: fits of its records.
    :returns: a JSON-ready mapping.
    """
    records = []
    for record in result.records:
        entry = record_row(record)
        entry["started_at"] = record.started_at
        entry["finished_at"] = record.finished_at
        records.append(entry)
    return {
        "config": result.config.to_mapping(),
        "config_hash": result.config.config_hash,
        "records": records,
        "fits": [fit_entry(fit) for fit in fits],
        "failures": [failure_entry(failure) for failure in result.failures],
    }


def pmf_filename(record: SweepRecord) -> str:
    """
    File name of a record's PMF dump.

    :param record: the record.
    :returns: pmf_A<value>_<method>.csv.
    """
    return f"pmf_A{record.quench_time!r}_{record.method.value}.csv"


def _write_text(path: Path, writer: Callable[[TextIO], None]) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as stream:
            writer(stream)
    except OSError as error:
        raise OutputError(
            f"Cannot write results ({error.strerror})", str(path),
        ) from error
    LOGGER.debug("Wrote %s", path)


def write_pmf(record: SweepRecord, directory: Path) -> Path:
    """
    Dump the PMF of a record.

    :param record: a record with its PMF.
    :param directory: output directory.
    :returns: the file written.
    :raises ConfigurationError: the record has no PMF.
    """
    pmf = record.pmf
    if pmf is None:
        raise ConfigurationError(
            f"Record for {record.method.value} at A={record.quench_time!r} has no PMF",
        )
    path = Path(directory) / pmf_filename(record)

    def write(stream: TextIO) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(PMF_COLUMNS)
        for n, probability in enumerate(pmf):
            writer.writerow([n, repr(float(probability))])

    _write_text(path, write)
    return path


def _ensure_directory(directory: Path) -> Path:
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as error:
        raise OutputError(
            f"Cannot create output directory ({error.strerror})", str(directory),
        ) from error
    return directory


def write_failures(result: SweepResult, directory: Path) -> Path:
    """
    Write the failure manifest of a sweep.

    :param result: the sweep result.
    :param directory: output directory, created if needed.
    :returns: the file written.
    """
    path = _ensure_directory(directory) / FAILURES_FILE
    document = [failure_entry(failure) for failure in result.failures]
    _write_text(path, lambda stream: json.dump(document, stream, indent=2))
    return path


def emit(
    result: SweepResult,
    fits: Sequence[PowerLawFit],
    output_format: OutputFormat,
    directory: Path,
    *,
    write_pmfs: bool = False,
) -> List[Path]:
    """
    Write the results of a sweep to a directory.

    The failure manifest is always written, even when no record succeeded.

    :param result: the sweep result.
    :param fits: fits of its records.
    :param output_format: CSV or JSON for the records.
    :param directory: output directory, created if needed.
    :param write_pmfs: also dump one PMF file per record.
    :returns: the files written.
    :raises ConfigurationError: there are no records to write.
    """
    directory = _ensure_directory(directory)
    written = [write_failures(result, directory)]

    if not result.records:
        raise ConfigurationError("The sweep produced no records to write")

    if output_format is OutputFormat.CSV:
        path = directory / "records.csv"
        _write_text(path, lambda stream: write_records_csv(result.records, stream))
        if fits:
            written.append(path)
            path = directory / "fits.csv"
            _write_text(path, lambda stream: write_fits_csv(fits, stream))
    else:
        path = directory / "records.json"
        contents = result_document(result, fits)
        _write_text(
            path, lambda stream: json.dump(contents, stream, indent=2, sort_keys=True),
        )
    written.append(path)

    if write_pmfs:
        written.extend(write_pmf(record, directory) for record in result.records)
    LOGGER.info("Wrote %d file(s) to %s", len(written), directory)
    return written
