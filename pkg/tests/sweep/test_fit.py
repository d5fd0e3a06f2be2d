"""Test power-law fits of the cumulants."""

import math
from typing import List, Sequence

import pytest

from kinkpairs.backends import IntegratorMethod, Method
from kinkpairs.counting import scaling_cumulant
from kinkpairs.exceptions import ConfigurationError, FitWarning, NumericalError
from kinkpairs.sweep import (
    PowerLawFit,
    SweepConfig,
    fit_power_law,
    fit_records,
    log_spaced,
    run_sweep,
)
from kinkpairs.sweep.runner import SweepRecord


def make_records(
    quench_times: Sequence[float],
    kappa1: Sequence[float],
    method: Method = Method.UNITARY,
) -> List[SweepRecord]:
    """Records with the given mean and a Poisson-like variance and skew."""
    return [
        SweepRecord(a, method, k1, 0.5 * k1, 0.25 * k1, 0.0, "abc")
        for a, k1 in zip(quench_times, kappa1)
    ]


def test_exact_power_law() -> None:
    """Test that an exact power law is recovered."""
    quench_times = [1.0, 2.0, 4.0, 8.0, 16.0]
    records = make_records(quench_times, [3.0 * a ** -0.5 for a in quench_times])
    fit = fit_power_law(records, 1, (1.0, 16.0))
    assert fit.q == 1
    assert fit.method is Method.UNITARY
    assert fit.exponent == pytest.approx(-0.5, abs=1e-9)
    assert fit.amplitude == pytest.approx(3.0, rel=1e-9)
    assert fit.stderr == pytest.approx(0.0, abs=1e-6)
    assert fit.window == (1.0, 16.0)


def test_window_selects_records() -> None:
    """Test that only records inside the window are fitted."""
    quench_times = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
    kappa1 = [a ** -0.5 for a in quench_times[:-1]] + [10.0]
    records = make_records(quench_times, kappa1)
    fit = fit_power_law(records, 2, (2.0, 16.0))
    assert fit.exponent == pytest.approx(-0.5, abs=1e-9)
    assert fit.amplitude == pytest.approx(0.5, rel=1e-9)


def test_noisy_fit_has_stderr() -> None:
    """Test that scattered data give a positive standard error."""
    quench_times = [1.0, 2.0, 4.0, 8.0]
    kappa1 = [1.0, 0.75, 0.45, 0.36]
    fit = fit_power_law(make_records(quench_times, kappa1), 1, (1.0, 8.0))
    assert -1.0 < fit.exponent < 0.0
    assert fit.stderr > 0


@pytest.mark.parametrize("q", [0, 4])
def test_invalid_order(q: int) -> None:
    """Test that only the first three cumulants can be fitted."""
    records = make_records([1.0, 2.0, 3.0], [1.0, 0.8, 0.6])
    with pytest.raises(ConfigurationError):
        fit_power_law(records, q, (1.0, 3.0))


def test_mixed_methods() -> None:
    """Test that records of several methods are not fitted together."""
    records = make_records([1.0, 2.0], [1.0, 0.8])
    records += make_records([3.0], [0.6], method=Method.CLOSED_FORM)
    with pytest.raises(ConfigurationError, match="exactly one method"):
        fit_power_law(records, 1, (1.0, 3.0))
    with pytest.raises(ConfigurationError):
        fit_power_law([], 1, (1.0, 3.0))


def test_too_few_points() -> None:
    """Test that at least three records must lie in the window."""
    records = make_records([1.0, 2.0, 4.0, 8.0], [1.0, 0.7, 0.5, 0.35])
    with pytest.raises(ConfigurationError, match="at least 3"):
        fit_power_law(records, 1, (3.0, 8.0))


def test_non_positive_cumulant() -> None:
    """Test that a vanishing cumulant cannot be fitted on a log scale."""
    records = make_records([1.0, 2.0, 4.0], [1.0, 0.0, 0.5])
    with pytest.raises(NumericalError):
        fit_power_law(records, 1, (1.0, 4.0))


def test_non_monotone_warns(caplog: pytest.LogCaptureFixture) -> None:
    """Test that data with a minimum are fitted with a warning."""
    records = make_records([1.0, 2.0, 4.0, 8.0], [2.0, 1.0, 1.5, 3.0])
    with pytest.warns(FitWarning):
        fit = fit_power_law(records, 1, (1.0, 8.0))
    assert math.isfinite(fit.exponent)
    assert "not monotone" in caplog.text


def test_negative_stderr() -> None:
    """Test that a fit cannot carry a negative standard error."""
    with pytest.raises(NumericalError):
        PowerLawFit(1, Method.UNITARY, -0.5, 1.0, -0.1, (1.0, 2.0))


def test_fit_records_skips(caplog: pytest.LogCaptureFixture) -> None:
    """Test that orders and methods that cannot be fitted are skipped."""
    records = make_records([1.0, 2.0, 4.0], [1.0, 0.7, 0.5])
    records += make_records([1.0, 2.0], [1.0, 0.7], method=Method.DEPHASED)
    fits = fit_records(records, (1.0, 4.0))
    assert [(fit.method, fit.q) for fit in fits] == [
        (Method.UNITARY, 1), (Method.UNITARY, 2), (Method.UNITARY, 3),
    ]
    assert "Skipping kappa_1 fit of Dephased" in caplog.text

    only_second = fit_records(records, (1.0, 4.0), orders=(2,), methods=[Method.UNITARY])
    assert [fit.q for fit in only_second] == [2]


def test_closed_form_exponents() -> None:
    """Test that closed-form cumulants follow the Kibble-Zurek power law."""
    cfg = SweepConfig(n_spins=1000, a_values=log_spaced(2.0, 50.0, 20))
    result = run_sweep(cfg)
    fits = fit_records(result.records, cfg.effective_fit_window)
    assert len(fits) == 3
    for fit in fits:
        tolerance = 0.03 if fit.q == 3 else 0.01
        assert fit.exponent == pytest.approx(-0.5, abs=tolerance)
        expected = scaling_cumulant(fit.q, 1000, 1.0)
        assert fit.amplitude == pytest.approx(expected, rel=1e-4)


@pytest.mark.slow
def test_dephased_sweep_has_minimum() -> None:
    """Test that dephasing noise gives the mean kink number an interior minimum."""
    a_values = tuple(sorted(log_spaced(10.0, 300.0, 10) + (100.0, 200.0)))
    cfg = SweepConfig(
        n_spins=100,
        a_values=a_values,
        methods=(Method.DEPHASED,),
        gamma=1e-3,
        integrator=IntegratorMethod.MAGNUS4,
        max_step=0.1,
    )
    result = run_sweep(cfg)
    assert not result.failures
    kappa1 = {record.quench_time: record.kappa1 for record in result.records}
    means = [kappa1[a] for a in a_values]
    lowest = min(range(len(means)), key=means.__getitem__)
    assert 0 < lowest < len(means) - 1
    assert kappa1[200.0] > kappa1[100.0]
    with pytest.warns(FitWarning):
        fit_power_law(result.records, 1, (10.0, 300.0))
