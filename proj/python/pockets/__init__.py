"""Entrainment of a phase oscillator by a smoothed seasonal forcing.

Thin Python layer over the C++ core in ``pockets._core``.
"""

from ._core import (
    OscillatorParams,
    ReducedField,
    SeasonalForcing,
    Smoother,
    block_coeff,
    entrainment_test,
    eval_forcing,
    gaussian_transform,
    map_to_general,
    measure_width,
    perturbed_coeff,
    pocket_count,
    poincare_map,
    predicted_boundaries,
    rhs,
    rotation_number,
    run_cli,
    scan,
    seasonal_normal_form,
    seasonal_range,
    smoothed_coeff,
    stationary_range,
)

__all__ = [
    "OscillatorParams",
    "ReducedField",
    "SeasonalForcing",
    "Smoother",
    "block_coeff",
    "entrainment_test",
    "eval_forcing",
    "gaussian_transform",
    "map_to_general",
    "measure_width",
    "perturbed_coeff",
    "pocket_count",
    "poincare_map",
    "predicted_boundaries",
    "rhs",
    "rotation_number",
    "run_cli",
    "scan",
    "seasonal_normal_form",
    "seasonal_range",
    "smoothed_coeff",
    "stationary_range",
]

__version__ = "0.1.0"
