"""Kink-pair counting statistics."""

from .closed_form import (
    SCALING_CONSTANTS,
    ClosedFormKind,
    Cumulants,
    LZForm,
    closed_form_cumulant,
    exact_cumulant,
    gaussian_pmf,
    gaussian_pmf_exact_variance,
    kzm_mean,
    lz_probability,
    polylog_3_2,
    polylog_characteristic,
    scaling_cumulant,
    scaling_onset,
    skewness,
    total_kink_cumulants,
)
from .distribution import (
    ExcitationSpectrum,
    KinkDistribution,
    characteristic_function,
    cumulants_from_spectrum,
    pmf_from_spectrum,
    pmf_via_characteristic,
    supremum_distance,
    total_variation_distance,
)

__all__ = [
    "ClosedFormKind",
    "Cumulants",
    "ExcitationSpectrum",
    "KinkDistribution",
    "LZForm",
    "SCALING_CONSTANTS",
    "characteristic_function",
    "closed_form_cumulant",
    "cumulants_from_spectrum",
    "exact_cumulant",
    "gaussian_pmf",
    "gaussian_pmf_exact_variance",
    "kzm_mean",
    "lz_probability",
    "pmf_from_spectrum",
    "pmf_via_characteristic",
    "polylog_3_2",
    "polylog_characteristic",
    "scaling_cumulant",
    "scaling_onset",
    "skewness",
    "supremum_distance",
    "total_kink_cumulants",
    "total_variation_distance",
]
