"""Full operator preconditioning experiments."""

from ._core import (
    ConfigError,
    Error,
    SingularMatrix,
    SingularSystem,
    cheb_transform,
    chebyshev_nodes,
    cond2,
    fem_errors,
    fem_matrix,
    gauss_legendre,
    gmres,
    interp_experiment,
    interpolation_matrix,
    mass_cond_bound,
    mass_matrix,
    prescribed_cond_matrix,
    run_experiment,
    solve_bvp,
    spectral_matrix,
)

__all__ = [
    "ConfigError",
    "Error",
    "SingularMatrix",
    "SingularSystem",
    "cheb_transform",
    "chebyshev_nodes",
    "cond2",
    "fem_errors",
    "fem_matrix",
    "gauss_legendre",
    "gmres",
    "interp_experiment",
    "interpolation_matrix",
    "mass_cond_bound",
    "mass_matrix",
    "prescribed_cond_matrix",
    "run_experiment",
    "solve_bvp",
    "spectral_matrix",
]
