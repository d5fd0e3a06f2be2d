"""
Sweep configuration.

A sweep is configured by one flat JSON document. Command-line flags are merged
over the document before validation, and the effective configuration is hashed
so that every output can be traced back to it.
"""

import hashlib
import json
import logging
import math
from dataclasses import MISSING, dataclass, fields
from enum import Enum
from pathlib import Path
from typing import Dict, Mapping, Optional, Sequence, Tuple, Type, TypeVar

import numpy as np

from kinkpairs.backends import (
    BackendSettings,
    DephasingBasis,
    DephasingConfig,
    IntegratorConfig,
    IntegratorMethod,
    Method,
)
from kinkpairs.counting import LZForm
from kinkpairs.exceptions import ConfigurationError, OutputError
from kinkpairs.modes import ChainSpec, QuenchSchedule, ScheduleKind

LOGGER = logging.getLogger(__name__)

HASH_LENGTH = 12

# Fit window bounds: below the fast-quench breakdown and above the finite-size
# adiabatic onset the power law does not hold.
FIT_WINDOW_FLOOR = 2.0
FIT_WINDOW_CEILING = 50.0


class OutputFormat(Enum):
    """Formats results can be written in."""

    CSV = "csv"
    JSON = "json"


def log_spaced(a_min: float, a_max: float, points: int) -> Tuple[float, ...]:
    """
    Logarithmically spaced quench times.

    :param a_min: smallest A.
    :param a_max: largest A.
    :param points: number of values.
    :returns: the quench times, ascending.
    :raises ConfigurationError: the range or count is invalid.
    """
    if not 0 < a_min <= a_max:
        raise ConfigurationError(f"Need 0 < a_min <= a_max, got {a_min!r}, {a_max!r}")
    if points < 1:
        raise ConfigurationError(f"a_points must be at least 1, got {points!r}")
    if points == 1:
        return (float(a_min),)
    return tuple(float(a) for a in np.geomspace(a_min, a_max, points))


def default_fit_window(a_values: Sequence[float]) -> Tuple[float, float]:
    """
    The fit window used when none is given.

    This is [max(2, A_min), min(50, A_max)], or the whole range of quench times
    when that is empty.

    :param a_values: the quench times.
    :returns: (A_lo, A_hi).
    :raises ConfigurationError: there are no quench times.
    """
    if not a_values:
        raise ConfigurationError("No quench times to fit")
    a_min, a_max = min(a_values), max(a_values)
    low = max(FIT_WINDOW_FLOOR, a_min)
    high = min(FIT_WINDOW_CEILING, a_max)
    if low >= high:
        return a_min, a_max
    return low, high


EnumT = TypeVar("EnumT", bound=Enum)


def _enum_value(enum: Type[EnumT], value: object, key: str) -> EnumT:
    if isinstance(value, enum):
        return value
    try:
        return enum(value)
    except ValueError:
        choices = ", ".join(str(member.value) for member in enum)
        raise ConfigurationError(
            f"{key} must be one of {choices}, got {value!r}",
        ) from None


def _number(value: object, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{key} must be a number, got {value!r}")
    return float(value)


def _integer(value: object, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{key} must be an integer, got {value!r}")
    return value


def _sequence(value: object, key: str) -> Tuple[object, ...]:
    if not isinstance(value, (list, tuple)):
        raise ConfigurationError(f"{key} must be a list, got {value!r}")
    return tuple(value)


def _window(value: object) -> Tuple[float, float]:
    bounds = _sequence(value, "fit_window")
    if len(bounds) != 2:
        raise ConfigurationError(f"fit_window needs two bounds, got {value!r}")
    return _number(bounds[0], "fit_window"), _number(bounds[1], "fit_window")


@dataclass(frozen=True)
class SweepConfig:
    """Everything that determines the results of a sweep."""

    n_spins: int
    a_values: Tuple[float, ...]
    methods: Tuple[Method, ...] = (Method.CLOSED_FORM,)
    schedule: ScheduleKind = ScheduleKind.LINEAR_RAMP
    g_start: float = -5.0
    g_end: float = 0.0
    chirp_factor: Optional[float] = None
    gamma: float = 0.0
    dephasing_basis: DephasingBasis = DephasingBasis.QUBIT_Z
    integrator: IntegratorMethod = IntegratorMethod.DOP853
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 0.1
    lz_form: LZForm = LZForm.SOFT_MODE
    workers: int = 1
    output_dir: str = "results"
    output_format: OutputFormat = OutputFormat.CSV
    write_pmf: bool = False
    fit_window: Optional[Tuple[float, float]] = None

    def __post_init__(self) -> None:
        ChainSpec(self.n_spins)
        if not self.a_values:
            raise ConfigurationError("A sweep needs at least one quench time")
        for a in self.a_values:
            if not (math.isfinite(a) and a > 0):
                raise ConfigurationError(f"Quench times must be positive, got {a!r}")
        if any(b <= a for a, b in zip(self.a_values, self.a_values[1:])):
            raise ConfigurationError("Quench times must be strictly ascending")
        if not self.methods:
            raise ConfigurationError("A sweep needs at least one method")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigurationError("Methods must not repeat")
        if self.fit_window is not None:
            low, high = self.fit_window
            if not low < high:
                raise ConfigurationError(f"Empty fit window {self.fit_window!r}")
            if low < self.a_values[0] or high > self.a_values[-1]:
                raise ConfigurationError(
                    f"Fit window {self.fit_window!r} lies outside the quench times"
                    f" [{self.a_values[0]!r}, {self.a_values[-1]!r}]",
                )
        # Build the numerical settings once so that invalid values fail here.
        self.backend_settings()
        self.schedule_for(self.a_values[0])

    @property
    def effective_fit_window(self) -> Tuple[float, float]:
        """
        The fit window, defaulting to [max(2, A_min), min(50, A_max)].

        :returns: (A_lo, A_hi).
        """
        if self.fit_window is not None:
            return self.fit_window
        return default_fit_window(self.a_values)

    @property
    def chain(self) -> ChainSpec:
        """
        The chain being swept.

        :returns: the chain.
        """
        return ChainSpec(self.n_spins)

    def schedule_for(self, quench_time: float) -> QuenchSchedule:
        """
        The quench schedule at one sweep point.

        :param quench_time: A.
        :returns: the schedule.
        """
        return QuenchSchedule(
            quench_time=quench_time,
            kind=self.schedule,
            g_start=self.g_start,
            g_end=self.g_end,
            chirp_factor=self.chirp_factor,
        )

    def backend_settings(self) -> BackendSettings:
        """
        Numerical settings for the backends.

        :returns: the settings.
        """
        return BackendSettings(
            integrator=IntegratorConfig(
                method=self.integrator,
                rel_tol=self.rel_tol,
                abs_tol=self.abs_tol,
                max_step=self.max_step,
            ),
            dephasing=DephasingConfig(gamma=self.gamma, basis=self.dephasing_basis),
            lz_form=self.lz_form,
            workers=self.workers,
        )

    def to_mapping(self) -> Dict[str, object]:
        """
        The configuration as plain JSON types.

        :returns: a flat mapping accepted by from_mapping.
        """
        return {
            "n_spins": self.n_spins,
            "a_values": list(self.a_values),
            "methods": [method.value for method in self.methods],
            "schedule": self.schedule.value,
            "g_start": self.g_start,
            "g_end": self.g_end,
            "chirp_factor": self.chirp_factor,
            "gamma": self.gamma,
            "dephasing_basis": self.dephasing_basis.value,
            "integrator": self.integrator.value,
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "max_step": self.max_step,
            "lz_form": self.lz_form.value,
            "workers": self.workers,
            "output_dir": self.output_dir,
            "output_format": self.output_format.value,
            "write_pmf": self.write_pmf,
            "fit_window": None if self.fit_window is None else list(self.fit_window),
        }

    def canonical_json(self) -> str:
        """
        Canonical serialisation, independent of how the config was built.

        Worker count and output location do not change results and are left out.

        :returns: compact JSON with sorted keys.
        """
        mapping = self.to_mapping()
        for key in ("workers", "output_dir", "output_format", "write_pmf"):
            del mapping[key]
        return json.dumps(mapping, sort_keys=True, separators=(",", ":"))

    @property
    def config_hash(self) -> str:
        """
        Short SHA-256 digest of the canonical configuration.

        :returns: hex digest prefix.
        """
        digest = hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()
        return digest[:HASH_LENGTH]

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, object]) -> "SweepConfig":
        """
        Build a configuration from a flat mapping.

        Quench times are given either as ``a_values`` or as ``a_min``, ``a_max``
        and ``a_points``, which are expanded log-spaced.

        :param mapping: the configuration values.
        :returns: the configuration.
        :raises ConfigurationError: a key is unknown, missing or invalid.
        """
        values = dict(mapping)
        unknown = set(values) - _KEYS - {"a_min", "a_max", "a_points"}
        if unknown:
            raise ConfigurationError(f"Unknown configuration keys: {sorted(unknown)}")
        if "n_spins" not in values:
            raise ConfigurationError("n_spins is required")

        range_keys = {"a_min", "a_max", "a_points"} & set(values)
        if range_keys:
            if "a_values" in values:
                raise ConfigurationError("Give either a_values or a_min/a_max/a_points")
            if range_keys != {"a_min", "a_max", "a_points"}:
                raise ConfigurationError("a_min, a_max and a_points go together")
            a_values = log_spaced(
                _number(values["a_min"], "a_min"),
                _number(values["a_max"], "a_max"),
                _integer(values["a_points"], "a_points"),
            )
        elif "a_values" in values:
            a_values = tuple(
                _number(a, "a_values") for a in _sequence(values["a_values"], "a_values")
            )
        else:
            raise ConfigurationError("No quench times given")

        def pick(key: str) -> object:
            return values[key] if key in values else _DEFAULTS[key]

        chirp_factor = pick("chirp_factor")
        fit_window = pick("fit_window")
        return cls(
            n_spins=_integer(values["n_spins"], "n_spins"),
            a_values=a_values,
            methods=tuple(
                _enum_value(Method, method, "methods")
                for method in _sequence(pick("methods"), "methods")
            ),
            schedule=_enum_value(ScheduleKind, pick("schedule"), "schedule"),
            g_start=_number(pick("g_start"), "g_start"),
            g_end=_number(pick("g_end"), "g_end"),
            chirp_factor=(
                None if chirp_factor is None else _number(chirp_factor, "chirp_factor")
            ),
            gamma=_number(pick("gamma"), "gamma"),
            dephasing_basis=_enum_value(
                DephasingBasis, pick("dephasing_basis"), "dephasing_basis",
            ),
            integrator=_enum_value(IntegratorMethod, pick("integrator"), "integrator"),
            rel_tol=_number(pick("rel_tol"), "rel_tol"),
            abs_tol=_number(pick("abs_tol"), "abs_tol"),
            max_step=_number(pick("max_step"), "max_step"),
            lz_form=_enum_value(LZForm, pick("lz_form"), "lz_form"),
            workers=_integer(pick("workers"), "workers"),
            output_dir=str(pick("output_dir")),
            output_format=_enum_value(
                OutputFormat, pick("output_format"), "output_format",
            ),
            write_pmf=bool(pick("write_pmf")),
            fit_window=None if fit_window is None else _window(fit_window),
        )

    @classmethod
    def from_json_file(
        cls,
        path: Path,
        overrides: Optional[Mapping[str, object]] = None,
    ) -> "SweepConfig":
        """
        Load a configuration document, with overrides applied on top.

        :param path: the JSON file.
        :param overrides: values that replace those in the file.
        :returns: the configuration.
        :raises OutputError: the file cannot be read.
        :raises ConfigurationError: the file is not a JSON object.
        """
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as error:
            raise OutputError(
                f"Cannot read configuration ({error.strerror})", str(path),
            ) from error
        try:
            document = json.loads(text)
        except json.JSONDecodeError as error:
            raise ConfigurationError(f"{path} is not valid JSON: {error}") from error
        if not isinstance(document, dict):
            raise ConfigurationError(f"{path} must contain a JSON object")

        merged = merge_overrides(document, overrides or {})
        LOGGER.debug("Loaded configuration from %s", path)
        return cls.from_mapping(merged)


def merge_overrides(
    document: Mapping[str, object],
    overrides: Mapping[str, object],
) -> Dict[str, object]:
    """
    Overlay override values on a configuration mapping.

    An override of the quench times, in either form, replaces both forms in
    the document.

    :param document: base values.
    :param overrides: replacing values.
    :returns: the merged mapping.
    """
    merged = dict(document)
    if {"a_values", "a_min", "a_max", "a_points"} & set(overrides):
        for key in ("a_values", "a_min", "a_max", "a_points"):
            merged.pop(key, None)
    merged.update(overrides)
    return merged


_KEYS = frozenset(SweepConfig.__dataclass_fields__)

_DEFAULTS: Dict[str, object] = {
    field.name: field.default
    for field in fields(SweepConfig)
    if field.default is not MISSING
}
