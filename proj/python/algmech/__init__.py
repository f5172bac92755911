"""Coordinate engine for mechanics on anchored vector bundles.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its public surface.
"""

from ._core import (
    DomainError,
    Model,
    ModelError,
    ParseError,
    SingularError,
    almost_lie_residual,
    el_field,
    el_residuals,
    energy,
    hamiltonian_field,
    hamiltonian_section,
    integrate_el,
    integrate_hamiltonian,
    jet_eval,
    lambda_matrix,
    legendre,
    omega_matrix,
    verify_all,
    verify_model,
)

__all__ = [
    "DomainError",
    "Model",
    "ModelError",
    "ParseError",
    "SingularError",
    "almost_lie_residual",
    "el_field",
    "el_residuals",
    "energy",
    "hamiltonian_field",
    "hamiltonian_section",
    "integrate_el",
    "integrate_hamiltonian",
    "jet_eval",
    "lambda_matrix",
    "legendre",
    "omega_matrix",
    "verify_all",
    "verify_model",
]

__version__ = "0.1.0"
