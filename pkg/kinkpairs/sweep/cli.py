"""
Command line interface.

Data goes to stdout (or the output directory) and log records go to stderr.
Exit codes: 0 success, 1 invalid configuration, 2 numerical failure,
3 I/O failure.
"""

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO

from kinkpairs import __version__
from kinkpairs.counting import ExcitationSpectrum, pmf_from_spectrum, skewness
from kinkpairs.exceptions import (
    ConfigurationError,
    KinkPairsException,
    NumericalError,
    OutputError,
)
from kinkpairs.oracle import cross_validate

from .config import SweepConfig, default_fit_window, merge_overrides
from .emit import (
    CSV_COLUMNS,
    emit,
    fit_entry,
    read_records_csv,
    record_row,
    write_failures,
)
from .fit import fit_records
from .runner import excitation_results, run_sweep

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIGURATION = 1
EXIT_NUMERICAL = 2
EXIT_OUTPUT = 3


def _add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="flat JSON configuration file")
    parser.add_argument("--n", dest="n_spins", type=int, help="number of spins N")
    parser.add_argument("--a", dest="a_values", type=float, nargs="+",
                        help="quench times A")
    parser.add_argument("--a-min", dest="a_min", type=float)
    parser.add_argument("--a-max", dest="a_max", type=float)
    parser.add_argument("--a-points", dest="a_points", type=int)
    parser.add_argument("--method", dest="methods", action="append",
                        help="ClosedForm, Unitary or Dephased; repeatable")
    parser.add_argument("--gamma", type=float, help="dephasing rate")
    parser.add_argument("--dephasing-basis", dest="dephasing_basis")
    parser.add_argument("--schedule", help="LinearRamp or RescaledChirp")
    parser.add_argument("--chirp-factor", dest="chirp_factor", type=float)
    parser.add_argument("--g-start", dest="g_start", type=float)
    parser.add_argument("--g-end", dest="g_end", type=float)
    parser.add_argument("--integrator", help="DOP853, RK45, Radau or Magnus4")
    parser.add_argument("--rel-tol", dest="rel_tol", type=float)
    parser.add_argument("--abs-tol", dest="abs_tol", type=float)
    parser.add_argument("--max-step", dest="max_step", type=float)
    parser.add_argument("--lz-form", dest="lz_form", help="SoftMode or FullGap")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--out", dest="output_dir")
    parser.add_argument("--format", dest="output_format", help="csv or json")
    parser.add_argument("--pmf", dest="write_pmf", action="store_const", const=True,
                        help="also dump one PMF file per record")
    parser.add_argument("--fit-window", dest="fit_window", type=float, nargs=2,
                        metavar=("A_LO", "A_HI"))


def build_parser() -> argparse.ArgumentParser:
    """
    The argument parser of the kinkpairs command.

    :returns: the parser.
    """
    parser = argparse.ArgumentParser(
        prog="kinkpairs",
        description="Kink-pair counting statistics of quenched Ising chains.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="log more; repeat for debug output")
    parser.add_argument("--quiet", action="store_true", help="log errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    for name, text in (
        ("pk", "per-mode excitation probabilities"),
        ("dist", "kink-pair distribution P(n)"),
        ("cumulants", "kink-pair and total-kink cumulants"),
        ("sweep", "sweep quench times, fit and write results"),
        ("oracle", "cross-validate against the exact chain"),
    ):
        _add_config_arguments(commands.add_parser(name, help=text))

    fit = commands.add_parser("fit", help="fit power laws to an emitted records CSV")
    fit.add_argument("records", type=Path, help="records.csv from a sweep")
    fit.add_argument("--fit-window", dest="fit_window", type=float, nargs=2,
                     metavar=("A_LO", "A_HI"))
    fit.add_argument("--q", dest="orders", type=int, action="append",
                     help="cumulant order; repeatable, all three by default")
    return parser


def configure_logging(verbose: int, quiet: bool) -> None:
    """
    Send log records to stderr at the requested level.

    :param verbose: number of -v flags.
    :param quiet: only log errors.
    """
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logging.captureWarnings(True)


def _overrides(args: argparse.Namespace) -> Dict[str, object]:
    keys = (
        "n_spins", "a_values", "a_min", "a_max", "a_points", "methods", "gamma",
        "dephasing_basis", "schedule", "chirp_factor", "g_start", "g_end",
        "integrator", "rel_tol", "abs_tol", "max_step", "lz_form", "workers",
        "output_dir", "output_format", "write_pmf", "fit_window",
    )
    values = {key: getattr(args, key) for key in keys}
    return {key: value for key, value in values.items() if value is not None}


def load_config(args: argparse.Namespace) -> SweepConfig:
    """
    The effective configuration: the file, if any, overridden by flags.

    :param args: parsed arguments.
    :returns: the configuration.
    """
    overrides = _overrides(args)
    if args.config is not None:
        return SweepConfig.from_json_file(args.config, overrides)
    return SweepConfig.from_mapping(merge_overrides({}, overrides))


def _write_rows(
    stream: TextIO,
    header: Sequence[str],
    rows: List[Sequence[object]],
) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(value) if isinstance(value, float) else value
                         for value in row])


def _pk(cfg: SweepConfig, stream: TextIO) -> None:
    rows: List[Sequence[object]] = []
    for quench_time in cfg.a_values:
        for method in cfg.methods:
            for result in excitation_results(cfg, method, quench_time):
                rows.append((quench_time, method.value, result.k, result.p_k,
                             result.norm_drift))
    _write_rows(stream, ("A", "method", "k", "p_k", "norm_drift"), rows)


def _dist(cfg: SweepConfig, stream: TextIO) -> None:
    rows: List[Sequence[object]] = []
    for quench_time in cfg.a_values:
        for method in cfg.methods:
            results = excitation_results(cfg, method, quench_time)
            spectrum = ExcitationSpectrum.from_probabilities([r.p_k for r in results])
            pmf = pmf_from_spectrum(spectrum).pmf
            rows.extend(
                (quench_time, method.value, n, float(p)) for n, p in enumerate(pmf)
            )
    _write_rows(stream, ("A", "method", "n", "P"), rows)


def _cumulants(cfg: SweepConfig, stream: TextIO) -> int:
    result = run_sweep(cfg)
    header = (*CSV_COLUMNS, "skewness")
    rows: List[Sequence[object]] = []
    for record in result.records:
        row = record_row(record)
        gamma1 = (
            skewness(record.kappa2, record.kappa3) if record.kappa2 > 0 else float("nan")
        )
        rows.append([*row.values(), gamma1])
    _write_rows(stream, header, rows)
    return EXIT_NUMERICAL if result.failures else EXIT_OK


def _sweep(cfg: SweepConfig, stream: TextIO) -> int:
    result = run_sweep(cfg)
    if not result.records:
        stream.write(f"{write_failures(result, Path(cfg.output_dir))}\n")
        return EXIT_NUMERICAL
    fits = fit_records(result.records, cfg.effective_fit_window, methods=cfg.methods)
    paths = emit(
        result, fits, cfg.output_format, Path(cfg.output_dir), write_pmfs=cfg.write_pmf,
    )
    for path in paths:
        stream.write(f"{path}\n")
    return EXIT_NUMERICAL if result.failures else EXIT_OK


def _fit(args: argparse.Namespace, stream: TextIO) -> None:
    records = read_records_csv(args.records)
    if not records:
        raise ConfigurationError(f"{args.records} holds no records")
    if args.fit_window is not None:
        window = (args.fit_window[0], args.fit_window[1])
    else:
        window = default_fit_window([record.quench_time for record in records])
    orders = tuple(args.orders) if args.orders else (1, 2, 3)
    fits = fit_records(records, window, orders=orders)
    json.dump([fit_entry(fit) for fit in fits], stream, indent=2)
    stream.write("\n")


def _oracle(cfg: SweepConfig, stream: TextIO) -> int:
    integrator = cfg.backend_settings().integrator
    reports: List[Dict[str, object]] = []
    for quench_time in cfg.a_values:
        report = cross_validate(cfg.chain, cfg.schedule_for(quench_time), integrator)
        reports.append({
            "A": quench_time,
            "n_spins": cfg.n_spins,
            "tv_distance": report.tv_distance,
            "cumulant_deviations": list(report.cumulant_deviations),
            "max_mode_deviation": report.max_mode_deviation,
            "oracle_pk": report.oracle_spectrum.probabilities.tolist(),
            "momentum_pk": report.momentum_spectrum.probabilities.tolist(),
            "passed": report.passed,
        })
    json.dump(reports, stream, indent=2)
    stream.write("\n")
    return EXIT_OK if all(entry["passed"] for entry in reports) else EXIT_NUMERICAL


def run(args: argparse.Namespace, stream: TextIO) -> int:
    """
    Execute a parsed command.

    :param args: parsed arguments.
    :param stream: where data is written.
    :returns: the exit code.
    """
    if args.command == "fit":
        _fit(args, stream)
        return EXIT_OK
    cfg = load_config(args)
    LOGGER.info("Configuration %s", cfg.config_hash)
    if args.command == "pk":
        _pk(cfg, stream)
    elif args.command == "dist":
        _dist(cfg, stream)
    elif args.command == "cumulants":
        return _cumulants(cfg, stream)
    elif args.command == "sweep":
        return _sweep(cfg, stream)
    elif args.command == "oracle":
        return _oracle(cfg, stream)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the kinkpairs command.

    :param argv: arguments, excluding the program name; sys.argv if None.
    :returns: the exit code.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        return run(args, sys.stdout)
    except ConfigurationError as error:
        LOGGER.error("Invalid configuration: %s", error)
        return EXIT_CONFIGURATION
    except NumericalError as error:
        LOGGER.error("Numerical failure: %s", error)
        return EXIT_NUMERICAL
    except OutputError as error:
        LOGGER.error("I/O failure: %s", error)
        return EXIT_OUTPUT
    except KinkPairsException as error:
        LOGGER.error("%s", error)
        return EXIT_CONFIGURATION


if __name__ == "__main__":
    sys.exit(main())
