"""Conformal symplectic optimization on the unit sphere."""

from ._confsym import (
    DegenerateConstraint,
    Error,
    InvalidInput,
    StepFailure,
    adaptive_optimize,
    conformality_residual,
    default_initial_state,
    eigen_oracle,
    gd_jacobian,
    gd_optimize,
    gd_step,
    generate_matrix,
    limiting_stepsize,
    optimal_stepsize,
    optimize,
    random_sphere_state,
    reference_spectrum_ranges,
    spectral_radius,
    step,
    symmetry_error,
)

__all__ = [
    "DegenerateConstraint",
    "Error",
    "InvalidInput",
    "StepFailure",
    "adaptive_optimize",
    "conformality_residual",
    "default_initial_state",
    "eigen_oracle",
    "gd_jacobian",
    "gd_optimize",
    "gd_step",
    "generate_matrix",
    "limiting_stepsize",
    "optimal_stepsize",
    "optimize",
    "random_sphere_state",
    "reference_spectrum_ranges",
    "spectral_radius",
    "step",
    "symmetry_error",
]
