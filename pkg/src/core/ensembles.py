"""Seeded random operators and states shared by scenarios and tests."""

from typing import Optional

import numpy as np
from scipy.stats import unitary_group

from .operators import DensityMatrix, Operator, UnitaryOperator, symmetrized


def random_hermitian(rng: np.random.Generator, dim: int, norm: Optional[float] = None) -> Operator:
    """Gaussian unitary ensemble draw, optionally rescaled to a given operator norm."""
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = symmetrized(raw)
    if norm is not None:
        largest = float(np.max(np.abs(np.linalg.eigvalsh(h))))
        h = h * (norm / largest)
    return Operator(h, (dim,), hermitian=True)


def random_density_matrix(rng: np.random.Generator, dim: int, rank: Optional[int] = None) -> DensityMatrix:
    """Ginibre-induced mixed state of the requested rank (full rank by default)."""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValueError(f"Rank {rank} outside [1, {dim}]")
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return DensityMatrix.from_matrix(rho / np.trace(rho).real, (dim,))


def random_unitary(rng: np.random.Generator, dim: int) -> UnitaryOperator:
    """Haar-random unitary."""
    if dim == 1:
        return UnitaryOperator(np.exp(1j * rng.uniform(-np.pi, np.pi, size=(1, 1))))
    return UnitaryOperator(unitary_group.rvs(dim, random_state=rng), (dim,))
