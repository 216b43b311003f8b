"""Largest roots of F-type matrix pencils, Tracy-Widom laws, and the
two-sample covariance equality test."""

from ._fpencil import (
    airy_ai,
    beta_transform,
    constants,
    empirical_constants,
    equality_test,
    largest_root,
    largest_root_matrices,
    run_null_coverage,
    run_power,
    sample_matrix,
    triple,
    tw_cdf,
    tw_quantile,
    typical_locations,
)

__all__ = [
    "airy_ai",
    "beta_transform",
    "constants",
    "empirical_constants",
    "equality_test",
    "largest_root",
    "largest_root_matrices",
    "run_null_coverage",
    "run_power",
    "sample_matrix",
    "triple",
    "tw_cdf",
    "tw_quantile",
    "typical_locations",
]
