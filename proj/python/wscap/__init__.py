"""Weak-signal mutual information and capacity approximations."""

from ._core import (
    AwgnChannel,
    CapacityDiagnostics,
    CapacityEstimate,
    CapacityMethod,
    ColoredCapacity,
    FisherMatrix,
    GammaChannel,
    InputCovariance,
    NoiseCovariance,
    ScalarChannel,
    WaterFilling,
    ar1_capacity,
    ar1_covariance,
    ar1_fisher,
    ar1_mi_per_use,
    c_bin,
    c_high_memory,
    c_high_memoryless,
    c_low,
    exact_awgn_amplitude_capacity,
    exact_colored_capacity,
    fisher_scalar,
    load_covariance_csv,
    ma1_covariance,
    ma1_fisher,
    mi_discrete_input,
    mi_weak,
    optimal_covariance,
    redundancy_mi,
    rho_to_gamma,
    shannon_awgn,
    water_filling,
    waterfill_smallP,
)

__all__ = [
    "AwgnChannel",
    "CapacityDiagnostics",
    "CapacityEstimate",
    "CapacityMethod",
    "ColoredCapacity",
    "FisherMatrix",
    "GammaChannel",
    "InputCovariance",
    "NoiseCovariance",
    "ScalarChannel",
    "WaterFilling",
    "ar1_capacity",
    "ar1_covariance",
    "ar1_fisher",
    "ar1_mi_per_use",
    "c_bin",
    "c_high_memory",
    "c_high_memoryless",
    "c_low",
    "exact_awgn_amplitude_capacity",
    "exact_colored_capacity",
    "fisher_scalar",
    "load_covariance_csv",
    "ma1_covariance",
    "ma1_fisher",
    "mi_discrete_input",
    "mi_weak",
    "optimal_covariance",
    "redundancy_mi",
    "rho_to_gamma",
    "shannon_awgn",
    "water_filling",
    "waterfill_smallP",
]

__version__ = "0.1.0"
