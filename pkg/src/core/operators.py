"""
Dense operators on finite-dimensional, tensor-structured Hilbert spaces.

Every Hamiltonian, state and propagator in the package is carried by an
`Operator`: an immutable complex matrix plus the ordered list of subsystem
dimensions it acts on. Spectral functions of Hermitian operators go through
a cached eigendecomposition; general norms go through singular values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from ..config.settings import settings


# =============================================================================
# Errors
# =============================================================================

class NotHermitianError(ValueError):
    """Raised when a Hermitian operator is required but not supplied."""


class NotUnitaryError(ValueError):
    """Raised when U†U deviates from the identity beyond tolerance."""


class BranchCutError(ValueError):
    """Raised when a unitary has an eigenphase on the logarithm's branch cut."""


# =============================================================================
# Helpers
# =============================================================================

def _frozen(entries: Union[np.ndarray, Sequence]) -> np.ndarray:
    matrix = np.array(entries, dtype=complex)
    matrix.setflags(write=False)
    return matrix


def _entry_scale(matrix: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(matrix)))) if matrix.size else 1.0


def hermiticity_defect(matrix: np.ndarray) -> float:
    """Largest entry of A - A†, relative to the entry scale of A."""
    return float(np.max(np.abs(matrix - matrix.conj().T))) / _entry_scale(matrix)


def unitarity_defect(matrix: np.ndarray) -> float:
    """Largest entry of U†U - 1."""
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0]))))


def state_tolerance(side: int) -> float:
    """Trace/positivity tolerance; grows linearly once the space exceeds 64 levels."""
    return settings.numerics.state_tol * max(1.0, side / 64.0)


def symmetrized(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.conj().T)


# =============================================================================
# Operator Types
# =============================================================================

@dataclass(frozen=True, eq=False)
class Operator:
    """Square complex matrix with declared subsystem structure."""

    entries: np.ndarray
    dims: Tuple[int, ...] = ()
    hermitian: bool = False

    def __post_init__(self) -> None:
        matrix = _frozen(self.entries)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"Operator must be a square matrix, got shape {matrix.shape}")

        dims = tuple(int(d) for d in self.dims) if self.dims else (matrix.shape[0],)
        if any(d < 1 for d in dims) or math.prod(dims) != matrix.shape[0]:
            raise ValueError(f"Subsystem dims {dims} do not multiply to matrix side {matrix.shape[0]}")

        object.__setattr__(self, "entries", matrix)
        object.__setattr__(self, "dims", dims)

        if self.hermitian:
            defect = hermiticity_defect(matrix)
            if defect > settings.numerics.hermitian_tol:
                raise NotHermitianError(f"Operator flagged Hermitian deviates by {defect:.3e}")

    @property
    def side(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def eigh(self) -> Tuple[np.ndarray, np.ndarray]:
        """Eigenvalues and eigenvectors of a Hermitian operator (cached)."""
        require_hermitian(self)
        return scipy.linalg.eigh(symmetrized(self.entries))

    def dag(self) -> "Operator":
        return Operator(self.entries.conj().T, self.dims, hermitian=self.hermitian)

    def is_hermitian(self) -> bool:
        return self.hermitian or hermiticity_defect(self.entries) <= settings.numerics.hermitian_tol

    def __add__(self, other: "Operator") -> "Operator":
        _require_same_side(self, other)
        return Operator(self.entries + other.entries, self.dims, hermitian=self.hermitian and other.hermitian)

    def __sub__(self, other: "Operator") -> "Operator":
        _require_same_side(self, other)
        return Operator(self.entries - other.entries, self.dims, hermitian=self.hermitian and other.hermitian)

    def __mul__(self, scalar: complex) -> "Operator":
        real = bool(np.isreal(scalar))
        return Operator(self.entries * scalar, self.dims, hermitian=self.hermitian and real)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        _require_same_side(self, other)
        return Operator(self.entries @ other.entries, self.dims)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dims={self.dims}, hermitian={self.hermitian})"


@dataclass(frozen=True, eq=False, repr=False)
class DensityMatrix(Operator):
    """Hermitian, unit-trace, positive semidefinite operator."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "hermitian", True)
        super().__post_init__()

        tol = state_tolerance(self.side)
        trace = complex(np.trace(self.entries))
        if abs(trace - 1.0) > tol:
            raise ValueError(f"Density matrix trace is {trace.real:.15g}, expected 1")
        lowest = float(scipy.linalg.eigvalsh(self.entries)[0])
        if lowest < -tol:
            raise ValueError(f"Density matrix has negative eigenvalue {lowest:.3e}")

    @classmethod
    def pure(cls, vector: Union[np.ndarray, Sequence], dims: Sequence[int] = ()) -> "DensityMatrix":
        """Projector onto a state vector (normalized here)."""
        psi = np.asarray(vector, dtype=complex).ravel()
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise ValueError("Cannot build a pure state from the zero vector")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()), tuple(dims))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, dims: Sequence[int] = ()) -> "DensityMatrix":
        """Build from a numerically evolved matrix, removing the anti-Hermitian rounding part.

        Quadrature and long propagations leave a trace drift of order 1e-12; drift up
        to ``numerics.trace_drift_tol`` is divided out, anything larger is rejected.
        """
        entries = symmetrized(np.asarray(matrix, dtype=complex))
        trace = float(np.real(np.trace(entries)))
        if trace > 0 and abs(trace - 1.0) <= settings.numerics.trace_drift_tol:
            entries = entries / trace
        return cls(entries, tuple(dims))


@dataclass(frozen=True, eq=False, repr=False)
class UnitaryOperator(Operator):
    """Operator satisfying U†U = 1 to the configured tolerance."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "hermitian", False)
        super().__post_init__()
        defect = unitarity_defect(self.entries)
        if defect > settings.numerics.unitary_tol:
            raise NotUnitaryError(f"U†U deviates from identity by {defect:.3e}")


def identity(dims: Sequence[int]) -> Operator:
    return Operator(np.eye(math.prod(dims)), tuple(dims), hermitian=True)


def basis_projector(index: int, dim: int) -> DensityMatrix:
    vector = np.zeros(dim, dtype=complex)
    vector[index] = 1.0
    return DensityMatrix.pure(vector)


def require_hermitian(op: Operator) -> None:
    if not op.is_hermitian():
        raise NotHermitianError(
            f"Hermitian operator required; deviation {hermiticity_defect(op.entries):.3e}"
        )


def _require_same_side(a: Operator, b: Operator) -> None:
    if a.side != b.side:
        raise ValueError(f"Dimension mismatch: {a.side} vs {b.side}")


# =============================================================================
# Compositions and Reductions
# =============================================================================

def tensor(a: Operator, b: Operator) -> Operator:
    """Kronecker composition; result dims are a.dims followed by b.dims."""
    matrix = np.kron(a.entries, b.entries)
    dims = a.dims + b.dims
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(matrix, dims)
    if isinstance(a, UnitaryOperator) and isinstance(b, UnitaryOperator):
        return UnitaryOperator(matrix, dims)
    return Operator(matrix, dims, hermitian=a.hermitian and b.hermitian)


def partial_trace(o: Operator, keep: int) -> Operator:
    """Trace out every subsystem except `keep`."""
    n = len(o.dims)
    if n < 2:
        raise ValueError("partial_trace needs at least two subsystems")
    if not 0 <= keep < n:
        raise ValueError(f"Invalid subsystem index {keep} for dims {o.dims}")

    d_keep = o.dims[keep]
    rest = o.side // d_keep
    blocks = np.moveaxis(o.entries.reshape(o.dims + o.dims), (keep, n + keep), (0, n))
    reduced = np.einsum("iaja->ij", blocks.reshape(d_keep, rest, d_keep, rest))

    if isinstance(o, DensityMatrix):
        return DensityMatrix.from_matrix(reduced, (d_keep,))
    return Operator(reduced, (d_keep,), hermitian=o.hermitian)


def commutator(a: Operator, b: Operator) -> Operator:
    _require_same_side(a, b)
    dims = a.dims if a.dims == b.dims else (a.side,)
    return Operator(a.entries @ b.entries - b.entries @ a.entries, dims)


# =============================================================================
# Norms
# =============================================================================

def trace_norm(a: Operator) -> float:
    """Sum of singular values (sum of |eigenvalues| for Hermitian input)."""
    if a.hermitian:
        return float(np.sum(np.abs(scipy.linalg.eigvalsh(symmetrized(a.entries)))))
    return float(np.sum(scipy.linalg.svdvals(a.entries)))


def operator_norm(a: Operator) -> float:
    """Largest singular value (max |eigenvalue| for Hermitian input)."""
    if a.hermitian:
        return float(np.max(np.abs(scipy.linalg.eigvalsh(symmetrized(a.entries)))))
    return float(scipy.linalg.svdvals(a.entries)[0])


# =============================================================================
# Expectation Values
# =============================================================================

def _trace_product(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.einsum("ij,ji->", a, b))


def expectation(h: Operator, rho: DensityMatrix) -> float:
    """tr(h rho) for Hermitian h; the rounding-level imaginary part is discarded."""
    require_hermitian(h)
    _require_same_side(h, rho)
    value = _trace_product(h.entries, rho.entries)
    if abs(value.imag) > settings.numerics.hermitian_tol * _entry_scale(h.entries) * h.side:
        raise ValueError(f"Expectation value has imaginary part {value.imag:.3e}")
    return value.real


def variance(h: Operator, rho: DensityMatrix) -> float:
    """tr(h² rho) - tr(h rho)², evaluated in centered form."""
    mean = expectation(h, rho)
    centered = h.entries - mean * np.eye(h.side)
    value = _trace_product(centered @ centered, rho.entries).real
    if value < 0:
        if value < -settings.numerics.state_tol * max(1.0, mean * mean):
            raise ValueError(f"Negative variance {value:.3e}")
        return 0.0
    return value


# =============================================================================
# Propagators and Logarithms
# =============================================================================

def propagator(h: Operator, t: float, hbar: float = 1.0) -> UnitaryOperator:
    """exp(-i h t / hbar) through the eigendecomposition of h."""
    eigenvalues, eigenvectors = h.eigh
    phases = np.exp(-1j * eigenvalues * t / hbar)
    return UnitaryOperator((eigenvectors * phases) @ eigenvectors.conj().T, h.dims)


def eigenphases(u: UnitaryOperator) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenphases in (-pi, pi] and the unitary Schur basis of a unitary."""
    schur_form, basis = scipy.linalg.schur(u.entries, output="complex")
    phases = np.angle(np.diag(schur_form))
    phases = np.where(phases <= -np.pi + settings.numerics.branch_snap_tol, np.pi, phases)
    return phases, basis


def unitary_log(u: UnitaryOperator) -> Operator:
    """Skew-Hermitian L with exp(L) = u, eigenphases on the (-pi, pi] branch."""
    if not isinstance(u, UnitaryOperator):
        u = UnitaryOperator(u.entries, u.dims)

    phases, basis = eigenphases(u)
    if np.any(phases < -np.pi + settings.numerics.branch_cut_tol):
        raise BranchCutError(f"Eigenphase {phases.min():.12f} lies on the logarithm branch cut")
    return Operator((basis * (1j * phases)) @ basis.conj().T, u.dims)
