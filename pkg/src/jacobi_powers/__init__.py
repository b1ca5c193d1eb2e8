"""Boundary triples and Weyl functions for powers of the Jacobi differential operator."""

from .asymptotics import Parameters, numeric_limit_oracle, sesquilinear_form
from .errors import JacobiPowersError
from .triple import gamma0, gamma1, interaction_matrix, regularized_basis
from .weyl import (
    GeneralRelation,
    KernelGamma0,
    KernelGamma1,
    Periodic,
    Separated,
    closed_form_spectrum,
    herglotz_check,
    pole_scan,
    weyl_m,
)

__all__ = [
    "GeneralRelation",
    "JacobiPowersError",
    "KernelGamma0",
    "KernelGamma1",
    "Parameters",
    "Periodic",
    "Separated",
    "closed_form_spectrum",
    "gamma0",
    "gamma1",
    "herglotz_check",
    "interaction_matrix",
    "numeric_limit_oracle",
    "pole_scan",
    "regularized_basis",
    "sesquilinear_form",
    "weyl_m",
]
__version__ = "0.1.0"
