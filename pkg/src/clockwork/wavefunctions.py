"""
Clock wavefunctions on a uniform position grid.

The ideal clock has H_A = nu P, so its energy moments are moments of the
derivative of the wavefunction. Derivatives use second-order central
differences with one-sided second-order stencils at the support edges.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from ..config.settings import settings

GridLike = Union[int, np.ndarray]


def _frozen(values: np.ndarray, dtype=float) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


def uniform_grid(left: float, right: float, grid: GridLike) -> np.ndarray:
    """Grid on [left, right]; an int gives the point count, an array is validated."""
    if isinstance(grid, (int, np.integer)):
        points = int(grid)
        if points < 3:
            raise ValueError(f"Grid needs at least 3 points, got {points}")
        return np.linspace(left, right, points)
    values = np.asarray(grid, dtype=float)
    if abs(values[0] - left) > 1e-12 * max(1.0, abs(left)) or abs(values[-1] - right) > 1e-12 * max(1.0, abs(right)):
        raise ValueError(f"Grid must span [{left}, {right}], got [{values[0]}, {values[-1]}]")
    return values


# =============================================================================
# Wavefunctions
# =============================================================================

@dataclass(frozen=True, eq=False)
class ClockWavefunction:
    """Amplitudes psi(x_i) on a uniform grid covering the declared support."""

    grid: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        grid = _frozen(self.grid)
        amplitudes = _frozen(self.amplitudes, complex)
        if grid.ndim != 1 or grid.shape != amplitudes.shape:
            raise ValueError("Grid and amplitudes must be 1-D arrays of equal length")
        if grid.size < 3 or grid.size % 2 == 0:
            raise ValueError(f"Clock grids need an odd number of points (>= 3), got {grid.size}")

        steps = np.diff(grid)
        if np.any(steps <= 0) or np.max(np.abs(steps - steps.mean())) > 1e-9 * steps.mean():
            raise ValueError("Clock grid must be uniformly spaced and increasing")

        peak = float(np.max(np.abs(amplitudes)))
        if abs(amplitudes[0]) > 1e-12 * peak or abs(amplitudes[-1]) > 1e-12 * peak:
            raise ValueError("Clock wavefunction must vanish at its support boundary")

        norm = float(np.sum(np.abs(amplitudes) ** 2) * steps.mean())
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"Clock wavefunction norm is {norm!r}, expected 1")

        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def normalized(cls, grid: np.ndarray, amplitudes: np.ndarray) -> "ClockWavefunction":
        """Pin the endpoints to zero and rescale to unit norm."""
        values = np.array(amplitudes, dtype=complex)
        values[0] = values[-1] = 0.0
        dx = (grid[-1] - grid[0]) / (len(grid) - 1)
        norm = np.sqrt(np.sum(np.abs(values) ** 2) * dx)
        if norm == 0:
            raise ValueError("Cannot normalize a vanishing wavefunction")
        return cls(grid, values / norm)

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], left: float, right: float,
                      grid: GridLike) -> "ClockWavefunction":
        x = uniform_grid(left, right, grid)
        return cls.normalized(x, fn(x))

    @property
    def dx(self) -> float:
        return float((self.grid[-1] - self.grid[0]) / (self.grid.size - 1))

    @property
    def support(self) -> Tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    @property
    def width(self) -> float:
        return float(self.grid[-1] - self.grid[0])

    def derivative(self) -> np.ndarray:
        return np.gradient(self.amplitudes, self.dx, edge_order=2)

    def shifted(self, offset: float) -> "ClockWavefunction":
        """The same amplitudes on a translated grid."""
        return ClockWavefunction(self.grid + offset, self.amplitudes)

    def weights(self) -> np.ndarray:
        """Trapezoid weights of the grid."""
        w = np.full(self.grid.size, self.dx)
        w[0] = w[-1] = 0.5 * self.dx
        return w


@dataclass(frozen=True, eq=False)
class ClockEnsemble:
    """Mixture sum_i p_i |psi_i><psi_i| of clock wavefunctions sharing one grid."""

    members: Tuple[ClockWavefunction, ...]
    weights: np.ndarray

    def __post_init__(self) -> None:
        members = tuple(self.members)
        weights = _frozen(self.weights)
        if not members or weights.shape != (len(members),):
            raise ValueError("Ensemble needs one weight per member")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError("Ensemble weights must be a probability vector")
        reference = members[0].grid
        for member in members[1:]:
            if member.grid.shape != reference.shape or np.max(np.abs(member.grid - reference)) > 1e-12:
                raise ValueError("Ensemble members must share one grid")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def pure(cls, psi: ClockWavefunction) -> "ClockEnsemble":
        return cls((psi,), np.array([1.0]))

    @property
    def grid(self) -> np.ndarray:
        return self.members[0].grid

    @property
    def support(self) -> Tuple[float, float]:
        return self.members[0].support


ClockState = Union[ClockWavefunction, ClockEnsemble]


def as_ensemble(state: ClockState) -> ClockEnsemble:
    return state if isinstance(state, ClockEnsemble) else ClockEnsemble.pure(state)


# =============================================================================
# Energy Moments
# =============================================================================

def _branches(state: ClockState, hbar: float, nu: float):
    """Isometric coordinates sqrt(w) psi_i and sqrt(w) H_A psi_i of each member."""
    ensemble = as_ensemble(state)
    root = np.sqrt(ensemble.members[0].weights())
    phis, hphis = [], []
    for member in ensemble.members:
        norm = np.sqrt(np.sum(member.weights() * np.abs(member.amplitudes) ** 2))
        phis.append(root * member.amplitudes / norm)
        hphis.append(root * (-1j * hbar * nu) * member.derivative() / norm)
    return ensemble.weights, np.array(phis), np.array(hphis)


def clock_energy_mean(state: ClockState, hbar: float = 1.0, nu: Optional[float] = None) -> float:
    """<H_A> = nu <P>."""
    nu = settings.clock.nu if nu is None else nu
    p, phis, hphis = _branches(state, hbar, nu)
    return float(np.sum(p * np.real(np.einsum("ij,ij->i", phis.conj(), hphis))))


def clock_energy_variance(state: ClockState, hbar: float = 1.0, nu: Optional[float] = None) -> float:
    """dH_A^2 = nu^2 hbar^2 (int |psi'|^2 - (Im int psi* psi')^2), averaged over the ensemble."""
    nu = settings.clock.nu if nu is None else nu
    p, phis, hphis = _branches(state, hbar, nu)
    second = np.sum(p * np.sum(np.abs(hphis) ** 2, axis=1))
    first = np.sum(p * np.real(np.einsum("ij,ij->i", phis.conj(), hphis)))
    return float(max(0.0, second - first * first))


def clock_commutator_trace_norm(state: ClockState, hbar: float = 1.0, nu: Optional[float] = None) -> float:
    """||[H_A, sigma_A]||_1, evaluated exactly in the span of {psi_i, H_A psi_i}."""
    nu = settings.clock.nu if nu is None else nu
    p, phis, hphis = _branches(state, hbar, nu)
    basis, singular, _ = scipy.linalg.svd(np.vstack([phis, hphis]).T, full_matrices=False)
    basis = basis[:, singular > singular[0] * 1e-13]

    a = basis.conj().T @ phis.T
    b = basis.conj().T @ hphis.T
    projected = (b * p) @ a.conj().T - (a * p) @ b.conj().T
    return float(np.sum(scipy.linalg.svdvals(projected)))


def _interpolated(member: ClockWavefunction, positions: np.ndarray, offset: float) -> np.ndarray:
    source = member.grid + offset
    return (np.interp(positions, source, member.amplitudes.real, left=0.0, right=0.0)
            + 1j * np.interp(positions, source, member.amplitudes.imag, left=0.0, right=0.0))


def clock_displacement(state: ClockState, shift: float) -> float:
    """||sigma - T(shift) sigma T(shift)^dagger||_1 for a translation of the clock by shift."""
    ensemble = as_ensemble(state)
    left, right = ensemble.support
    if abs(shift) >= right - left:
        return 2.0

    dx = ensemble.members[0].dx
    points = int(round((right - left + abs(shift)) / dx)) + 1
    positions = min(left, left + shift) + dx * np.arange(points)
    root = np.sqrt(np.full(points, dx))

    def isometric(offset: float) -> np.ndarray:
        rows = [root * _interpolated(member, positions, offset) for member in ensemble.members]
        return np.array([row / np.linalg.norm(row) for row in rows])

    before, after = isometric(0.0), isometric(shift)
    basis, singular, _ = scipy.linalg.svd(np.vstack([before, after]).T, full_matrices=False)
    basis = basis[:, singular > singular[0] * 1e-13]

    a = basis.conj().T @ before.T
    b = basis.conj().T @ after.T
    p = ensemble.weights
    difference = (a * p) @ a.conj().T - (b * p) @ b.conj().T
    return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (difference + difference.conj().T)))))


# =============================================================================
# Optimal Clock States
# =============================================================================

def optimal_wavefunction(L: float, grid: GridLike = 2001) -> ClockWavefunction:
    """sqrt(2/L) sin(-pi x / L) on [-L, 0]."""
    if not L > 0:
        raise ValueError(f"Clock width must be positive, got {L}")
    x = uniform_grid(-L, 0.0, grid)
    return ClockWavefunction.normalized(x, np.sqrt(2.0 / L) * np.sin(-np.pi * x / L))


def kinetic_ground_state(L: float, grid: GridLike = 2001) -> Tuple[float, ClockWavefunction]:
    """Lowest eigenpair of -d^2/dx^2 on [-L, 0] with r(-L) = r(0) = 0."""
    if not L > 0:
        raise ValueError(f"Clock width must be positive, got {L}")
    x = uniform_grid(-L, 0.0, grid)
    if x.size < settings.clock.min_grid_points:
        raise ValueError(f"Grid too coarse: {x.size} points, need at least {settings.clock.min_grid_points}")

    dx = L / (x.size - 1)
    interior = x.size - 2
    diagonal = np.full(interior, 2.0 / dx**2)
    off_diagonal = np.full(interior - 1, -1.0 / dx**2)
    eigenvalue, vector = scipy.linalg.eigh_tridiagonal(diagonal, off_diagonal, select="i", select_range=(0, 0))

    values = np.zeros(x.size)
    values[1:-1] = vector[:, 0]
    if values.sum() < 0:
        values = -values
    return float(eigenvalue[0]), ClockWavefunction.normalized(x, values)


def variational_minimize(L: float, grid: GridLike = 2001) -> ClockWavefunction:
    """Minimizer of int |r'|^2 with pinned boundary values: real and node-free."""
    return kinetic_ground_state(L, grid)[1]


def random_clock_wavefunction(
    rng: np.random.Generator,
    width: float,
    grid: GridLike = 401,
    modes: int = 8,
    offset: float = 0.0,
) -> ClockWavefunction:
    """Random sine series on [offset - width, offset] with coefficients decaying as 1/n^2."""
    n = np.arange(1, modes + 1)
    coefficients = (rng.standard_normal(modes) + 1j * rng.standard_normal(modes)) / n**2
    x = uniform_grid(offset - width, offset, grid)
    phase = np.pi * (x - x[0]) / width
    return ClockWavefunction.normalized(x, np.sin(np.outer(phase, n)) @ coefficients)


def wavefunction_table(psi: ClockWavefunction) -> Sequence[Tuple[float, float]]:
    """(x, |psi|^2) rows for plotting."""
    return list(zip(psi.grid.tolist(), (np.abs(psi.amplitudes) ** 2).tolist()))
