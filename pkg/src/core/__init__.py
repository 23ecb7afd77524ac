"""
Operator Core Package

Dense complex linear algebra for finite-dimensional quantum systems:
compositions, reductions, norms and spectral functions.
"""

from .operators import (
    Operator,
    DensityMatrix,
    UnitaryOperator,
    NotHermitianError,
    NotUnitaryError,
    BranchCutError,
    identity,
    basis_projector,
    tensor,
    partial_trace,
    trace_norm,
    operator_norm,
    commutator,
    expectation,
    variance,
    propagator,
    eigenphases,
    unitary_log,
)
from .ensembles import random_hermitian, random_density_matrix, random_unitary

__all__ = [
    "Operator",
    "DensityMatrix",
    "UnitaryOperator",
    "NotHermitianError",
    "NotUnitaryError",
    "BranchCutError",
    "identity",
    "basis_projector",
    "tensor",
    "partial_trace",
    "trace_norm",
    "operator_norm",
    "commutator",
    "expectation",
    "variance",
    "propagator",
    "eigenphases",
    "unitary_log",
    "random_hermitian",
    "random_density_matrix",
    "random_unitary",
]
