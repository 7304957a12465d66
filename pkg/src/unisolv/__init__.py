"""Exact unisolvence certification for nonconforming vector finite elements."""

__version__ = "0.1.0"

from .certificate import alpha, build_M, cauchy_det, verify_certificate
from .dofsys import (
    dof_matrix,
    dual_basis,
    enumerate_functionals,
    unisolvence,
    verify_counterexample,
)
from .femspace import build_space, dimension, harmonic_basis
from .kernels import BACKEND
from .simplexint import Simplex

__all__ = [
    "BACKEND",
    "Simplex",
    "alpha",
    "build_M",
    "build_space",
    "cauchy_det",
    "dimension",
    "dof_matrix",
    "dual_basis",
    "enumerate_functionals",
    "harmonic_basis",
    "unisolvence",
    "verify_certificate",
    "verify_counterexample",
]
