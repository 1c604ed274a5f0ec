"""Python access to the visco spectral core."""

from ._core import (
    IntegrityError,
    ModelParams,
    NumericalError,
    branch_factors,
    default_c1,
    eigenvalues,
    fit_decay_exponent,
    fnv1a64,
    generator_matrix,
    kernel_apply,
    kernel_factors,
    manifold_basis,
    radial_decay,
    read_snapshot,
    run_experiment,
    set_quiet,
    theoretical_rate,
    verify,
    verify_suite_names,
)

__all__ = [name for name in dir() if not name.startswith("_")]
