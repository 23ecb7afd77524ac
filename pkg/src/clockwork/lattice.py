"""
Finite ring discretization of the ideal clock.

The clock lives on M sites x_j = origin + j dx with the momentum operator
diagonal in the discrete Fourier modes k_m = 2 pi m / (M dx), m in a band
symmetric about zero. Free evolution by H_A = nu P is then an exact cyclic
shift by one site per dx/nu, so every lattice check samples time at those
commensurate instants.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Tuple, Union

import numpy as np

from ..config.settings import lattice_tolerance, settings
from ..core.operators import DensityMatrix, Operator, operator_norm, propagator, symmetrized, trace_norm
from ..machine.dynamics import EvolutionResult, evolve_total
from ..machine.model import BipartiteModel, ConditionWindow
from .engine import ClockMachineSpec
from .wavefunctions import ClockEnsemble, ClockState, ClockWavefunction, as_ensemble


class LatticeWrapError(ValueError):
    """Raised when a clock machine does not fit on the ring with the required margin."""


@dataclass(frozen=True, eq=False)
class LatticeClock:
    """Ring of `sites` positions spaced by dx, starting at `origin`."""

    sites: int
    dx: float
    origin: float
    nu: float = 1.0
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if self.sites < 3 or self.sites % 2 == 0:
            raise ValueError(f"Lattice needs an odd number of sites (>= 3), got {self.sites}")
        if not self.dx > 0 or not self.nu > 0 or not self.hbar > 0:
            raise ValueError("Lattice spacing, speed and hbar must be positive")

    @classmethod
    def covering(
        cls,
        clock_width: float,
        profile_width: float,
        dx: float,
        window: float,
        nu: float = 1.0,
        hbar: float = 1.0,
        margin: Optional[float] = None,
    ) -> "LatticeClock":
        """Smallest ring with 0 on a site that holds a clock of width K over [-window, (K + L)/nu]."""
        margin = 8 * dx if margin is None else margin
        left = clock_width + nu * window + margin
        right = clock_width + profile_width + margin
        n_left = math.ceil(left / dx - 1e-9)
        n_right = math.ceil(right / dx - 1e-9)
        if (n_left + n_right + 1) % 2 == 0:
            n_right += 1
        return cls(sites=n_left + n_right + 1, dx=dx, origin=-n_left * dx, nu=nu, hbar=hbar)

    @classmethod
    def for_spec(
        cls,
        spec: ClockMachineSpec,
        dx: float,
        window: Optional[float] = None,
        margin: Optional[float] = None,
    ) -> "LatticeClock":
        """Ring for a clock machine; `window` is the span T of the switch-on scan and defaults to tau."""
        window = spec.tau if window is None else window
        return cls.covering(spec.clock_width, spec.profile_width, dx, window, spec.nu, spec.hbar, margin)

    @cached_property
    def positions(self) -> np.ndarray:
        return self.origin + self.dx * np.arange(self.sites)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        half = (self.sites - 1) // 2
        return 2.0 * np.pi * np.arange(-half, half + 1) / (self.sites * self.dx)

    @cached_property
    def modes(self) -> np.ndarray:
        """Unitary matrix whose columns are the plane waves e^{i k_m x_j} / sqrt(M)."""
        return np.exp(1j * np.outer(self.positions, self.wavenumbers)) / math.sqrt(self.sites)

    @cached_property
    def momentum(self) -> Operator:
        p = (self.modes * (self.hbar * self.wavenumbers)[None, :]) @ self.modes.conj().T
        return Operator(symmetrized(p), (self.sites,), hermitian=True)

    @cached_property
    def hamiltonian(self) -> Operator:
        """H_A = nu P."""
        return self.momentum * self.nu

    @property
    def energies(self) -> np.ndarray:
        return self.hbar * self.nu * self.wavenumbers

    @property
    def span(self) -> Tuple[float, float]:
        return float(self.positions[0]), float(self.positions[-1])

    def commensurate(self, t: float) -> float:
        """Smallest multiple of dx/nu not below t."""
        step = self.dx / self.nu
        return math.ceil(t / step - 1e-9) * step

    def amplitudes(self, psi: ClockWavefunction) -> np.ndarray:
        """Site amplitudes sqrt(dx) psi(x_j), interpolated and renormalized."""
        left, right = psi.support
        if left < self.positions[0] - 1e-12 or right > self.positions[-1] + 1e-12:
            raise LatticeWrapError(f"Clock support [{left}, {right}] leaves the ring {self.span}")
        x = self.positions
        values = np.interp(x, psi.grid, psi.amplitudes.real, left=0.0, right=0.0) + 1j * np.interp(
            x, psi.grid, psi.amplitudes.imag, left=0.0, right=0.0
        )
        norm = np.linalg.norm(values)
        if norm == 0:
            raise ValueError("Clock wavefunction vanishes on every lattice site")
        return values / norm

    def density(self, clock: ClockState) -> DensityMatrix:
        ensemble = as_ensemble(clock)
        matrix = np.zeros((self.sites, self.sites), dtype=complex)
        for p, member in zip(ensemble.weights, ensemble.members):
            v = self.amplitudes(member)
            matrix += p * np.outer(v, v.conj())
        return DensityMatrix.from_matrix(matrix, (self.sites,))


# =============================================================================
# Joint Model
# =============================================================================

def _require_fit(spec: ClockMachineSpec, lattice: LatticeClock, window: float) -> None:
    if abs(lattice.nu - spec.nu) > 1e-12 * spec.nu or abs(lattice.hbar - spec.hbar) > 1e-12 * spec.hbar:
        raise ValueError("Lattice and clock machine disagree on nu or hbar")
    need_left = -spec.clock_width - spec.nu * window
    need_right = spec.clock_width + spec.profile_width + lattice.dx
    left, right = lattice.span
    if left > need_left - lattice.dx or right < need_right:
        raise LatticeWrapError(
            f"Ring {lattice.span} must cover [{need_left}, {need_right}] with one site of margin; "
            f"the clock would wrap around before the scan ends"
        )


def lattice_model(
    spec: ClockMachineSpec,
    lattice: LatticeClock,
    window: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> BipartiteModel:
    """H = H_S (x) 1 + 1 (x) nu P + sum_j V_S(x_j) (x) |x_j><x_j| at a commensurate tau.

    Without an explicit tolerance the model carries the uncalibrated c dx^2 default.
    """
    if tolerance is None:
        tolerance = lattice_tolerance(lattice.dx, operator_norm(spec.h_s))
    window = spec.tau if window is None else window
    _require_fit(spec, lattice, window)

    d, m = spec.h_s.side, lattice.sites
    inside = np.nonzero((lattice.positions >= spec.profile.support[0]) & (lattice.positions <= spec.profile.end))[0]
    v4 = np.zeros((d, m, d, m), dtype=complex)
    if inside.size:
        v4[:, inside, :, inside] = spec.profile.sample(lattice.positions[inside])
    v = Operator(symmetrized(v4.reshape(d * m, d * m)), (d, m), hermitian=True)

    step = lattice.dx / lattice.nu
    return BipartiteModel(
        h_s=spec.h_s,
        h_a=lattice.hamiltonian,
        v=v,
        rho_s=spec.rho_s,
        sigma_a=lattice.density(spec.clock),
        tau=lattice.commensurate(spec.tau),
        hbar=spec.hbar,
        name=f"{spec.name}-lattice",
        autonomous=True,
        window=ConditionWindow(span=math.floor(window / step + 1e-9) * step, step=step),
        tolerance=tolerance,
        lattice_dx=lattice.dx,
    )


def lattice_simulate(spec: ClockMachineSpec, lattice: LatticeClock) -> EvolutionResult:
    """Dense joint evolution of the discretized clock machine to its commensurate tau."""
    return evolve_total(lattice_model(spec, lattice))


# =============================================================================
# Tolerance Calibration
# =============================================================================

@dataclass(frozen=True)
class LatticeCalibration:
    """Lattice tolerance c dx^2 ||H_S|| with c fixed by a Richardson pair at dx and 2 dx."""

    dx: float
    energy_scale: float
    estimate: float
    coefficient: float

    @property
    def tolerance(self) -> float:
        return max(self.coefficient * self.dx * self.dx * self.energy_scale, settings.bounds.semi_analytic_tol)


def _rotated_back(spec: ClockMachineSpec, result: EvolutionResult) -> np.ndarray:
    """Final system state carried back by free evolution from the commensurate time to tau."""
    u = propagator(spec.h_s, spec.tau - result.t, spec.hbar).entries
    return u @ result.rho_s_final.entries @ u.conj().T


def richardson_calibration(dx: float, disagreement: float, energy_scale: float, name: str = "lattice") -> LatticeCalibration:
    """Calibration from the energy disagreement between the 2 dx and dx lattices.

    The error is taken to shrink at least as dx^2, so the fine lattice is off by at
    most a third of the disagreement; the tolerance is `bounds.lattice_safety` times that.
    """
    scale = max(1.0, energy_scale)
    estimate = abs(disagreement) / 3.0
    coefficient = settings.bounds.lattice_safety * estimate / (dx * dx * scale)
    logging.debug(f"📏 Calibrated lattice tolerance for {name}: c = {coefficient:.6g} at dx = {dx:g}")
    return LatticeCalibration(dx=dx, energy_scale=scale, estimate=estimate, coefficient=coefficient)


def calibrate_lattice(spec: ClockMachineSpec, dx: float, window: Optional[float] = None) -> LatticeCalibration:
    """Richardson pair at 2 dx and dx for a clock machine.

    The disagreement is ||rho_2dx - rho_dx||_1 ||H_S||, which bounds the energy gap.
    """
    states = [
        _rotated_back(spec, lattice_simulate(spec, LatticeClock.for_spec(spec, spacing, window)))
        for spacing in (2.0 * dx, dx)
    ]
    disagreement = trace_norm(Operator(states[0] - states[1], spec.h_s.dims)) * operator_norm(spec.h_s)
    return richardson_calibration(dx, disagreement, operator_norm(spec.h_s), spec.name)


# =============================================================================
# Agent Energy Distributions
# =============================================================================

@dataclass(frozen=True, eq=False)
class EnergyDistribution:
    """Probability of each discrete agent energy hbar nu k_m."""

    energies: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        if self.energies.shape != self.probabilities.shape:
            raise ValueError("Energies and probabilities must have equal length")
        if abs(float(self.probabilities.sum()) - 1.0) > 1e-10:
            raise ValueError(f"Distribution sums to {float(self.probabilities.sum())!r}")

    def mean(self) -> float:
        return float(np.dot(self.energies, self.probabilities))

    def std(self) -> float:
        centered = self.energies - self.mean()
        return float(np.sqrt(max(0.0, np.dot(centered * centered, self.probabilities))))

    def rows(self) -> List[Tuple[float, float]]:
        return list(zip(self.energies.tolist(), self.probabilities.tolist()))


def momentum_distribution(
    state: Union[DensityMatrix, ClockWavefunction, ClockEnsemble],
    lattice: LatticeClock,
) -> EnergyDistribution:
    """Agent energy distribution over the lattice momentum modes."""
    if isinstance(state, DensityMatrix):
        if state.side != lattice.sites:
            raise ValueError(f"Agent state has side {state.side}, lattice has {lattice.sites} sites")
        probabilities = np.real(np.einsum("jm,jk,km->m", lattice.modes.conj(), state.entries, lattice.modes))
    else:
        ensemble = as_ensemble(state)
        probabilities = np.zeros(lattice.sites)
        for p, member in zip(ensemble.weights, ensemble.members):
            probabilities += p * np.abs(lattice.modes.conj().T @ lattice.amplitudes(member)) ** 2
    probabilities = np.clip(probabilities, 0.0, None)
    return EnergyDistribution(lattice.energies.copy(), probabilities)
