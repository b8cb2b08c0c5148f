"""Elementary-landscape decomposition of the quadratic assignment problem
under the swap neighborhood, with brute-force verification oracles."""

from .core import (
    GeneralTensor,
    Permutation,
    QapInstance,
    Scalar,
    neighborhood_size,
)
from .decomposition import (
    AverageTriple,
    ComponentTriple,
    OmegaKind,
    average_triple,
    characteristic_constant,
    component_average,
    component_value,
    component_value_fast,
    component_value_ref,
    decompose,
    neighborhood_avg_wave,
    omega,
    omega_mean,
    omega_neighborhood_sum_oracle,
    omega_params,
    phi_diag,
    wave_predict_component,
    weight_denominator,
)
from .oracle import (
    ComponentVariances,
    ElementarityReport,
    SpaceStats,
    check_elementary,
    enumerate_space,
    neighborhood_avg_brute,
    variance_triple,
)
from .qaplib import ParseError, generate_instance, parse_qaplib, serialize_qaplib
from .spectral import (
    AutocorrReport,
    WalkSeries,
    analyze_autocorr,
    autocorr_coefficient,
    component_weights,
    decay_rates,
    empirical_autocorr,
    random_walk,
    theoretical_autocorr,
)
from .verification import ClaimResult, run_verification

__version__ = "0.1.0"

__all__ = [
    "AutocorrReport",
    "AverageTriple",
    "ClaimResult",
    "ComponentTriple",
    "ComponentVariances",
    "ElementarityReport",
    "GeneralTensor",
    "OmegaKind",
    "ParseError",
    "Permutation",
    "QapInstance",
    "Scalar",
    "SpaceStats",
    "WalkSeries",
    "analyze_autocorr",
    "autocorr_coefficient",
    "average_triple",
    "characteristic_constant",
    "check_elementary",
    "component_average",
    "component_value",
    "component_value_fast",
    "component_value_ref",
    "component_weights",
    "decay_rates",
    "decompose",
    "empirical_autocorr",
    "enumerate_space",
    "generate_instance",
    "neighborhood_avg_brute",
    "neighborhood_avg_wave",
    "neighborhood_size",
    "omega",
    "omega_mean",
    "omega_neighborhood_sum_oracle",
    "omega_params",
    "parse_qaplib",
    "phi_diag",
    "random_walk",
    "run_verification",
    "serialize_qaplib",
    "theoretical_autocorr",
    "variance_triple",
    "wave_predict_component",
    "weight_denominator",
]
