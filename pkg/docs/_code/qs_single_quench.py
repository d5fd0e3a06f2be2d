from kinkpairs import ChainSpec, QuenchSchedule, ScheduleKind
from kinkpairs.backends import BackendSettings, Method, default_environment
from kinkpairs.counting import ExcitationSpectrum, exact_cumulant, pmf_from_spectrum

chain = ChainSpec(n_spins=200)
schedule = QuenchSchedule(quench_time=5.0, kind=ScheduleKind.LINEAR_RAMP)

environment = default_environment()
for method in (Method.CLOSED_FORM, Method.UNITARY):
    backend = environment.create_backend(method, BackendSettings())
    results = backend.excitation_spectrum(chain, schedule)

    spectrum = ExcitationSpectrum.from_probabilities([r.p_k for r in results])
    distribution = pmf_from_spectrum(spectrum)
    print(method.value, distribution.cumulants)  # noqa: T201

# The continuum limit of the closed form.
print([exact_cumulant(q, 200, 5.0) for q in (1, 2, 3)])  # noqa: T201
