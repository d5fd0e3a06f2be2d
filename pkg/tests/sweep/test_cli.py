"""Test the kinkpairs command line."""

import csv
import io
import json
import math
from pathlib import Path
from typing import Dict, List

import pytest

from kinkpairs.backends import MethodEnvironment
from kinkpairs.sweep.cli import (
    EXIT_CONFIGURATION,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_OUTPUT,
    build_parser,
    main,
)

from ..backends.utils import FailingBackend, MockBackend


def failing_environment() -> MethodEnvironment:
    """An environment whose dephased backend always fails on some modes."""
    environment = MethodEnvironment("MockEnv")
    environment.register_backend(MockBackend)
    environment.register_backend(FailingBackend)
    return environment


def read_csv(text: str) -> List[Dict[str, str]]:
    """Parse CSV output into dictionaries."""
    return list(csv.DictReader(io.StringIO(text)))


def test_pk(capsys: pytest.CaptureFixture[str]) -> None:
    """Test the per-mode probabilities output."""
    assert main(["pk", "--n", "8", "--a", "1.0", "2.0"]) == EXIT_OK
    rows = read_csv(capsys.readouterr().out)
    assert len(rows) == 8
    assert set(rows[0]) == {"A", "method", "k", "p_k", "norm_drift"}
    assert {row["method"] for row in rows} == {"ClosedForm"}
    assert all(0.0 <= float(row["p_k"]) <= 1.0 for row in rows)


def test_dist(capsys: pytest.CaptureFixture[str]) -> None:
    """Test that the printed distribution is normalised."""
    assert main(["dist", "--n", "10", "--a", "0.5", "--method", "Unitary"]) == EXIT_OK
    rows = read_csv(capsys.readouterr().out)
    assert [int(row["n"]) for row in rows] == [0, 1, 2, 3, 4, 5]
    assert math.fsum(float(row["P"]) for row in rows) == pytest.approx(1.0, abs=1e-12)


def test_cumulants(capsys: pytest.CaptureFixture[str]) -> None:
    """Test the cumulant table with skewness."""
    assert main(["cumulants", "--n", "100", "--a", "1", "10"]) == EXIT_OK
    rows = read_csv(capsys.readouterr().out)
    assert [float(row["A"]) for row in rows] == [1.0, 10.0]
    assert float(rows[0]["kappa1"]) > float(rows[1]["kappa1"])
    assert float(rows[0]["kappa2_T"]) == pytest.approx(4 * float(rows[0]["kappa2"]))
    assert math.isfinite(float(rows[0]["skewness"]))


def test_sweep_writes_results(capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
    """Test that a sweep writes records, fits and the failure manifest."""
    out = tmp_path / "results"
    code = main([
        "sweep", "--n", "200", "--a-min", "1", "--a-max", "100", "--a-points", "5",
        "--out", str(out), "--pmf",
    ])
    assert code == EXIT_OK
    written = capsys.readouterr().out.split()
    assert str(out / "records.csv") in written
    assert str(out / "fits.csv") in written
    assert str(out / "failures.json") in written
    assert len(read_csv((out / "records.csv").read_text())) == 5
    assert len(list(out.glob("pmf_A*_ClosedForm.csv"))) == 5


def test_sweep_from_config_file(tmp_path: Path) -> None:
    """Test that flags override the configuration file."""
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({
        "n_spins": 100, "a_values": [1, 2, 4, 8], "output_format": "csv",
    }))
    out = tmp_path / "out"
    code = main([
        "sweep", "--config", str(config), "--format", "json", "--out", str(out),
    ])
    assert code == EXIT_OK
    document = json.loads((out / "records.json").read_text())
    assert document["config"]["output_format"] == "json"
    assert len(document["records"]) == 4


def test_fit(capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
    """Test fitting a records file written by a sweep."""
    out = tmp_path / "out"
    assert main([
        "sweep", "--n", "1000", "--a-min", "2", "--a-max", "50", "--a-points", "8",
        "--out", str(out),
    ]) == EXIT_OK
    capsys.readouterr()

    assert main(["fit", str(out / "records.csv"), "--q", "1"]) == EXIT_OK
    (fit,) = json.loads(capsys.readouterr().out)
    assert fit["q"] == 1
    assert fit["method"] == "ClosedForm"
    assert fit["exponent"] == pytest.approx(-0.5, abs=0.01)


def test_fit_default_window(capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
    """Test that fit without a window uses the same default as the sweep."""
    out = tmp_path / "out"
    assert main([
        "sweep", "--n", "1000", "--a-min", "0.5", "--a-max", "300", "--a-points", "16",
        "--out", str(out),
    ]) == EXIT_OK
    capsys.readouterr()
    swept = read_csv((out / "fits.csv").read_text())

    assert main(["fit", str(out / "records.csv")]) == EXIT_OK
    fits = json.loads(capsys.readouterr().out)
    assert [fit["q"] for fit in fits] == [1, 2, 3]
    assert all(fit["window"] == [2.0, 50.0] for fit in fits)
    for fit, row in zip(fits, swept):
        assert fit["exponent"] == pytest.approx(float(row["exponent"]), rel=1e-9)
    assert fits[0]["exponent"] == pytest.approx(-0.5, abs=0.01)


def test_oracle(capsys: pytest.CaptureFixture[str]) -> None:
    """Test that the oracle agrees with the momentum-space result."""
    assert main(["oracle", "--n", "8", "--a", "2", "--method", "Unitary"]) == EXIT_OK
    (report,) = json.loads(capsys.readouterr().out)
    assert report["passed"]
    assert report["n_spins"] == 8
    assert len(report["oracle_pk"]) == 4


@pytest.mark.parametrize("argv", [
    ["pk", "--n", "7", "--a", "1"],
    ["dist", "--n", "8"],
    ["pk", "--n", "8", "--a", "1", "--method", "Exact"],
    ["cumulants", "--n", "8", "--a", "1", "--a-min", "1", "--a-max", "2",
     "--a-points", "2"],
    ["oracle", "--n", "16", "--a", "1"],
])
def test_configuration_errors(argv: List[str], caplog: pytest.LogCaptureFixture) -> None:
    """Test that invalid configurations exit with code 1."""
    assert main(argv) == EXIT_CONFIGURATION
    assert "Invalid configuration" in caplog.text


def test_missing_config_file(tmp_path: Path) -> None:
    """Test that an unreadable configuration file exits with code 3."""
    assert main(["sweep", "--config", str(tmp_path / "missing.json")]) == EXIT_OUTPUT


def test_missing_records_file(tmp_path: Path) -> None:
    """Test that an unreadable records file exits with code 3."""
    assert main(["fit", str(tmp_path / "records.csv")]) == EXIT_OUTPUT


def test_numerical_failure(
    monkeypatch: pytest.MonkeyPatch,
    caplog: pytest.LogCaptureFixture,
) -> None:
    """Test that a failing spectrum exits with code 2."""
    monkeypatch.setattr(
        "kinkpairs.sweep.runner.default_environment", failing_environment,
    )
    assert main(["pk", "--n", "8", "--a", "1", "--method", "Dephased"]) == EXIT_NUMERICAL
    assert "Numerical failure" in caplog.text


def test_partial_sweep_failure(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
    tmp_path: Path,
) -> None:
    """Test that a sweep with failed points still writes its records."""
    monkeypatch.setattr(
        "kinkpairs.sweep.runner.default_environment", failing_environment,
    )
    code = main([
        "sweep", "--n", "8", "--a", "1", "2", "4", "--method", "ClosedForm",
        "--method", "Dephased", "--out", str(tmp_path),
    ])
    assert code == EXIT_NUMERICAL
    assert len(read_csv((tmp_path / "records.csv").read_text())) == 3
    assert len(json.loads((tmp_path / "failures.json").read_text())) == 3


def test_total_sweep_failure(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    """Test that a sweep where every point failed only writes the manifest."""
    monkeypatch.setattr(
        "kinkpairs.sweep.runner.default_environment", failing_environment,
    )
    code = main([
        "sweep", "--n", "8", "--a", "1", "--method", "Dephased", "--out", str(tmp_path),
    ])
    assert code == EXIT_NUMERICAL
    assert (tmp_path / "failures.json").exists()
    assert not (tmp_path / "records.csv").exists()


def test_parser_requires_command() -> None:
    """Test that a subcommand must be given."""
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
