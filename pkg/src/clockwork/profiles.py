"""
Interaction profiles V_S(s) on [0, L] and the effective unitary they imprint
on the system while the clock sweeps through them.

Sign conventions follow the physical propagator exp(-iHt/hbar): the
interaction-picture kernel is exp(iH_S t/hbar) V_S(nu t) exp(-iH_S t/hbar) with
the clock position s = nu t.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..config.settings import settings
from ..core.operators import Operator, UnitaryOperator, require_hermitian, unitary_log


def _frozen(values: np.ndarray, dtype=float) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


def profile_steps(width: float, steps: Optional[int] = None) -> int:
    """Number of time-ordering intervals for a profile of the given width."""
    if steps is not None:
        return max(1, int(steps))
    return max(settings.clock.min_steps, int(np.ceil(settings.clock.steps_per_unit_length * width)))


@dataclass(frozen=True, eq=False)
class InteractionProfile:
    """Hermitian samples V_S(s_j) on a uniform grid over [start, start + L]."""

    grid: np.ndarray
    matrices: np.ndarray

    def __post_init__(self) -> None:
        grid = _frozen(self.grid)
        matrices = _frozen(self.matrices, complex)
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError("Profile grid must be 1-D with at least two points")
        if matrices.ndim != 3 or matrices.shape[0] != grid.size or matrices.shape[1] != matrices.shape[2]:
            raise ValueError(f"Profile samples must have shape ({grid.size}, d, d), got {matrices.shape}")
        if grid[0] < 0:
            raise ValueError("Interaction profiles live on s >= 0")

        steps = np.diff(grid)
        if np.any(steps <= 0) or np.max(np.abs(steps - steps.mean())) > 1e-9 * steps.mean():
            raise ValueError("Profile grid must be uniformly spaced and increasing")

        scale = max(1.0, float(np.max(np.abs(matrices))))
        defect = float(np.max(np.abs(matrices - np.conj(np.swapaxes(matrices, 1, 2)))))
        if defect > settings.numerics.hermitian_tol * scale:
            raise ValueError(f"Profile samples deviate from Hermitian by {defect:.3e}")
        if np.max(np.abs(matrices[0])) > 1e-12 * scale or np.max(np.abs(matrices[-1])) > 1e-12 * scale:
            raise ValueError("Interaction profile must vanish at its support boundary")

        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "matrices", matrices)

    @property
    def ds(self) -> float:
        return float((self.grid[-1] - self.grid[0]) / (self.grid.size - 1))

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    @property
    def support(self) -> Tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    @property
    def end(self) -> float:
        return float(self.grid[-1])

    @classmethod
    def zero(cls, dim: int, width: float, steps: Optional[int] = None) -> "InteractionProfile":
        n = profile_steps(width, steps)
        return cls(np.linspace(0.0, width, n + 1), np.zeros((n + 1, dim, dim)))

    def sample(self, positions: np.ndarray) -> np.ndarray:
        """Linear interpolation onto arbitrary positions; zero outside the support."""
        positions = np.asarray(positions, dtype=float)
        flat = self.matrices.reshape(self.grid.size, -1)
        out = np.empty((positions.size, flat.shape[1]), dtype=complex)
        for entry in range(flat.shape[1]):
            out[:, entry] = np.interp(positions, self.grid, flat[:, entry].real, left=0.0, right=0.0) + 1j * np.interp(
                positions, self.grid, flat[:, entry].imag, left=0.0, right=0.0
            )
        return 0.5 * (out.reshape(-1, self.dim, self.dim) + np.conj(np.swapaxes(out.reshape(-1, self.dim, self.dim), 1, 2)))


# =============================================================================
# Bump Window
# =============================================================================

def bump_profile(width: float, steps: Optional[int] = None, offset: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """cos^2 window on [offset, offset + width], renormalized so sum f ds = 1."""
    if not width > 0:
        raise ValueError(f"Bump width must be positive, got {width}")
    n = profile_steps(width, steps)
    grid = offset + np.linspace(0.0, width, n + 1)
    f = np.sin(np.pi * (grid - offset) / width) ** 2
    f[0] = f[-1] = 0.0
    return grid, f / (np.sum(f) * width / n)


# =============================================================================
# Profiles From Target Unitaries
# =============================================================================

def _eigenbasis(h_s: Operator) -> Tuple[np.ndarray, np.ndarray]:
    require_hermitian(h_s)
    return h_s.eigh


def _interaction_phases(energies: np.ndarray, s: np.ndarray, hbar: float) -> np.ndarray:
    """exp(-i s (E_j - E_k) / hbar) for every s, shape (n, d, d)."""
    gaps = energies[:, None] - energies[None, :]
    return np.exp(-1j * s[:, None, None] * gaps[None, :, :] / hbar)


def build_vs_from_unitary(
    u_target: UnitaryOperator,
    f: np.ndarray,
    h_s: Operator,
    grid: np.ndarray,
    hbar: float = 1.0,
    nu: float = 1.0,
) -> InteractionProfile:
    """V_S(s) = i hbar nu f(s) exp(-isH_S/(hbar nu)) log(U) exp(isH_S/(hbar nu))."""
    f = np.asarray(f, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if f.shape != grid.shape:
        raise ValueError("Bump samples and grid must have equal length")
    if abs(f[0]) > 1e-15 * np.max(np.abs(f)) or abs(f[-1]) > 1e-15 * np.max(np.abs(f)):
        raise ValueError("Bump profile must vanish at both ends of its support")

    ds = (grid[-1] - grid[0]) / (grid.size - 1)
    f = f / (np.sum(f) * ds)

    energies, basis = _eigenbasis(h_s)
    log_u = basis.conj().T @ unitary_log(u_target).entries @ basis
    action = hbar * nu
    rotated = (1j * action) * f[:, None, None] * _interaction_phases(energies, grid, action) * log_u[None, :, :]
    matrices = basis[None, :, :] @ rotated @ basis.conj().T[None, :, :]
    matrices = 0.5 * (matrices + np.conj(np.swapaxes(matrices, 1, 2)))
    return InteractionProfile(grid, matrices)


# =============================================================================
# Time-Ordered Propagation
# =============================================================================

def effective_unitary(
    profile: InteractionProfile,
    h_s: Operator,
    hbar: float = 1.0,
    nu: float = 1.0,
) -> UnitaryOperator:
    """T-exp(-(i/hbar nu) int exp(isH_S/hbar nu) V_S(s) exp(-isH_S/hbar nu) ds), s = nu t.

    Each grid interval contributes the exponential of its endpoint-averaged
    kernel; later intervals multiply from the left.
    """
    if profile.dim != h_s.side:
        raise ValueError(f"Profile dimension {profile.dim} does not match H_S ({h_s.side})")

    action = hbar * nu
    energies, basis = _eigenbasis(h_s)
    local = basis.conj().T[None, :, :] @ profile.matrices @ basis[None, :, :]
    kernel = np.conj(_interaction_phases(energies, profile.grid, action)) * local

    generators = 0.5 * profile.ds * (kernel[1:] + kernel[:-1])
    generators = 0.5 * (generators + np.conj(np.swapaxes(generators, 1, 2)))
    values, vectors = np.linalg.eigh(generators)
    steps = (vectors * np.exp(-1j * values / action)[:, None, :]) @ np.conj(np.swapaxes(vectors, 1, 2))

    product = np.eye(h_s.side, dtype=complex)
    for step in steps:
        product = step @ product
    return UnitaryOperator(basis @ product @ basis.conj().T, h_s.dims)


def dressed_unitary(
    u: UnitaryOperator,
    x: float,
    h_s: Operator,
    hbar: float = 1.0,
    nu: float = 1.0,
) -> UnitaryOperator:
    """U(x) = exp(-iH_S x/hbar nu) U exp(iH_S x/hbar nu): the imprint left by a clock starting at x."""
    energies, basis = _eigenbasis(h_s)
    phases = np.exp(-1j * energies * x / (hbar * nu))
    local = basis.conj().T @ u.entries @ basis
    return UnitaryOperator(basis @ (phases[:, None] * local * phases.conj()[None, :]) @ basis.conj().T, u.dims)
