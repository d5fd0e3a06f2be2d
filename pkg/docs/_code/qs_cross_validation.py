from kinkpairs import ChainSpec, QuenchSchedule, ScheduleKind
from kinkpairs.backends import IntegratorConfig
from kinkpairs.oracle import cross_validate

report = cross_validate(
    ChainSpec(n_spins=10),
    QuenchSchedule(quench_time=2.0, kind=ScheduleKind.LINEAR_RAMP),
    IntegratorConfig(),
)
print(report.tv_distance, report.passed)  # noqa: T201
