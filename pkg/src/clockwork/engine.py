"""
Semi-analytic engine for the ideal clock-driven machine.

A clock at position x in [-K, 0] reaches the interaction region at time -x/nu
and leaves it before tau = (K + L)/nu, so the system ends in
exp(-iH_S tau/hbar) U(x) rho_S U(x)^dagger exp(iH_S tau/hbar) with
U(x) = exp(-iH_S x/hbar nu) U exp(iH_S x/hbar nu). Averages over the clock position
use composite Simpson quadrature on the wavefunction grid.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.integrate import simpson

from ..bounds.measurement import MachineMeasurement, measure
from ..config.settings import settings
from ..core.operators import (
    DensityMatrix,
    Operator,
    UnitaryOperator,
    expectation,
    operator_norm,
    propagator,
    require_hermitian,
    trace_norm,
)
from ..shared_models import CheckReport
from .profiles import InteractionProfile, effective_unitary
from .wavefunctions import (
    ClockEnsemble,
    ClockState,
    ClockWavefunction,
    as_ensemble,
    clock_commutator_trace_norm,
    clock_displacement,
    clock_energy_mean,
    clock_energy_variance,
)


@dataclass(frozen=True, eq=False)
class ClockMachineSpec:
    """System, interaction profile and clock state of one ideal clock machine."""

    h_s: Operator
    profile: InteractionProfile
    clock: ClockState
    rho_s: DensityMatrix
    nu: float = 1.0
    hbar: float = 1.0
    name: str = "clock"

    def __post_init__(self) -> None:
        require_hermitian(self.h_s)
        object.__setattr__(self, "clock", as_ensemble(self.clock))
        if self.profile.dim != self.h_s.side or self.rho_s.side != self.h_s.side:
            raise ValueError("System dimension mismatch between H_S, profile and rho_S")
        if not self.nu > 0 or not self.hbar > 0:
            raise ValueError("nu and hbar must be positive")

        left, right = self.clock.support
        if right > 0 or left >= right:
            raise ValueError(f"Clock support [{left}, {right}] must lie left of 0")
        if self.profile.support[0] < 0:
            raise ValueError("Interaction profile must lie right of 0")

    @property
    def clock_width(self) -> float:
        """K: extent of the clock support measured from 0."""
        return -self.clock.support[0]

    @property
    def profile_width(self) -> float:
        """L: right end of the interaction support."""
        return self.profile.end

    @property
    def tau(self) -> float:
        return (self.clock_width + self.profile_width) / self.nu

    @cached_property
    def unitary(self) -> UnitaryOperator:
        return effective_unitary(self.profile, self.h_s, self.hbar, self.nu)

    @cached_property
    def _frame(self):
        """Everything expressed in the H_S eigenbasis."""
        energies, basis = self.h_s.eigh
        return energies, basis, basis.conj().T @ self.unitary.entries @ basis, basis.conj().T @ self.rho_s.entries @ basis


def _dressed_stack(spec: ClockMachineSpec, member: ClockWavefunction) -> np.ndarray:
    """U(x) in the H_S eigenbasis for every grid point, shape (n, d, d)."""
    energies, _, local_u, _ = spec._frame
    phases = np.exp(-1j * np.outer(member.grid, energies) / (spec.hbar * spec.nu))
    return phases[:, :, None] * local_u[None, :, :] * phases.conj()[:, None, :]


def _quadrature(member: ClockWavefunction, values: np.ndarray) -> np.ndarray:
    """Simpson average of values(x) under |psi(x)|^2, renormalized on the grid."""
    density = np.abs(member.amplitudes) ** 2
    weight = simpson(density, dx=member.dx)
    weighted = density.reshape((-1,) + (1,) * (values.ndim - 1)) * values
    average = simpson(weighted.real, dx=member.dx, axis=0)
    if np.iscomplexobj(weighted):
        average = average + 1j * simpson(weighted.imag, dx=member.dx, axis=0)
    return average / weight


# =============================================================================
# System Side
# =============================================================================

def final_system_state(spec: ClockMachineSpec) -> DensityMatrix:
    """rho_S'(tau) = sum_i p_i int |psi_i|^2 exp(-iH_S tau) U(x) rho_S U(x)^dagger exp(iH_S tau) dx."""
    energies, basis, _, local_rho = spec._frame
    averaged = np.zeros_like(local_rho)
    for p, member in zip(spec.clock.weights, spec.clock.members):
        dressed = _dressed_stack(spec, member)
        conjugated = dressed @ local_rho[None, :, :] @ np.conj(np.swapaxes(dressed, 1, 2))
        averaged = averaged + p * _quadrature(member, conjugated)

    free = np.exp(-1j * energies * spec.tau / spec.hbar)
    averaged = free[:, None] * averaged * free.conj()[None, :]
    return DensityMatrix.from_matrix(basis @ averaged @ basis.conj().T, spec.h_s.dims)


def final_energy(spec: ClockMachineSpec) -> float:
    """sum_i p_i int |psi_i(x)|^2 tr H_S U(x) rho_S U(x)^dagger dx."""
    energies, _, _, local_rho = spec._frame
    total = 0.0
    for p, member in zip(spec.clock.weights, spec.clock.members):
        dressed = _dressed_stack(spec, member)
        conjugated = dressed @ local_rho[None, :, :] @ np.conj(np.swapaxes(dressed, 1, 2))
        per_position = np.real(np.einsum("j,njj->n", energies, conjugated))
        total += p * float(_quadrature(member, per_position))
    return total


def free_system_state(spec: ClockMachineSpec) -> DensityMatrix:
    u = propagator(spec.h_s, spec.tau, spec.hbar).entries
    return DensityMatrix.from_matrix(u @ spec.rho_s.entries @ u.conj().T, spec.h_s.dims)


def clock_work(spec: ClockMachineSpec) -> float:
    return expectation(spec.h_s, spec.rho_s) - final_energy(spec)


# =============================================================================
# Agent Side
# =============================================================================

def final_agent_state(spec: ClockMachineSpec) -> ClockEnsemble:
    """Agent state after the interaction, as an ensemble on the grid translated by nu tau.

    sigma'(x, y) = sum_i p_i psi_i(x) psi_i(y)* tr U(x) rho_S U(y)^dagger decomposes into
    branches psi_i(x) <a|U(x)|v_b> sqrt(lambda_b) over the eigenpairs of rho_S.
    """
    _, _, _, local_rho = spec._frame
    populations, vectors = np.linalg.eigh(local_rho)
    keep = populations > 1e-15
    roots = vectors[:, keep] * np.sqrt(populations[keep])[None, :]

    members, weights = [], []
    for p, member in zip(spec.clock.weights, spec.clock.members):
        dressed = _dressed_stack(spec, member) @ roots[None, :, :]
        branches = member.amplitudes[:, None, None] * dressed
        grid = member.grid + spec.nu * spec.tau
        for a in range(branches.shape[1]):
            for b in range(branches.shape[2]):
                amplitudes = branches[:, a, b]
                mass = float(np.sum(np.abs(amplitudes) ** 2) * member.dx)
                if p * mass <= 1e-15:
                    continue
                members.append(ClockWavefunction.normalized(grid, amplitudes))
                weights.append(p * mass)

    weights = np.array(weights)
    return ClockEnsemble(tuple(members), weights / weights.sum())


# =============================================================================
# Checks
# =============================================================================

def interaction_overlap(spec: ClockMachineSpec, t: float) -> float:
    """sum_i p_i int |psi_i(x)|^2 ||V_S(x + nu t)|| dx: how much of the clock sits under the profile at t."""
    total = 0.0
    for p, member in zip(spec.clock.weights, spec.clock.members):
        norms = np.linalg.norm(spec.profile.sample(member.grid + spec.nu * t), ord=2, axis=(1, 2))
        total += p * float(np.sum(member.weights() * np.abs(member.amplitudes) ** 2 * norms))
    return total


def clock_condition1_residual(spec: ClockMachineSpec, samples: Optional[int] = None) -> float:
    """Largest interaction overlap over t in [-tau, 0]."""
    samples = samples or settings.bounds.condition_samples
    return max(interaction_overlap(spec, t) for t in np.linspace(-spec.tau, 0.0, samples + 1))


def check_clock_condition1(spec: ClockMachineSpec, samples: Optional[int] = None,
                           tol: Optional[float] = None) -> CheckReport:
    tol = settings.bounds.semi_analytic_tol if tol is None else tol
    residual = clock_condition1_residual(spec, samples)
    return CheckReport(
        name="condition1",
        passed=residual <= tol,
        residual=residual,
        tolerance=tol,
        detail="clock clear of the interaction for t in [-tau, 0]",
    )


def check_clock_switch_off(spec: ClockMachineSpec, t: float, tol: Optional[float] = None) -> CheckReport:
    """The clock has left the interaction region at t >= tau."""
    tol = settings.bounds.semi_analytic_tol if tol is None else tol
    residual = interaction_overlap(spec, t)
    early = t < spec.tau * (1.0 - 1e-12)
    return CheckReport(
        name="switch_off",
        passed=not early and residual <= tol,
        residual=residual,
        tolerance=tol,
        detail=f"t = {t:.6g} precedes tau = {spec.tau:.6g}" if early else f"overlap at t = {t:.6g}",
    )


def check_clock_uncertainty(spec: ClockMachineSpec, tol: Optional[float] = None) -> CheckReport:
    """tau dH_A >= pi hbar."""
    spread = math.sqrt(clock_energy_variance(spec.clock, spec.hbar, spec.nu))
    tol = settings.bounds.uncertainty_tol if tol is None else tol
    product = spec.tau * spread
    deficit = math.pi * spec.hbar - product
    return CheckReport(
        name="clock_uncertainty",
        passed=deficit <= tol,
        residual=max(0.0, deficit),
        tolerance=tol,
        detail=f"tau dH_A = {product:.12g}, pi hbar = {math.pi * spec.hbar:.12g}",
    )


@measure.register
def _measure_clock(spec: ClockMachineSpec) -> MachineMeasurement:
    final = final_system_state(spec)
    work = clock_work(spec)
    after = final_agent_state(spec)
    tol = settings.bounds.semi_analytic_tol
    residual = clock_condition1_residual(spec)
    return MachineMeasurement(
        name=spec.name,
        work=work,
        tau=spec.tau,
        hbar=spec.hbar,
        h_s_norm=operator_norm(spec.h_s),
        delta_h_a=math.sqrt(clock_energy_variance(spec.clock, spec.hbar, spec.nu)),
        comm_norm=clock_commutator_trace_norm(spec.clock, spec.hbar, spec.nu),
        agent_displacement=clock_displacement(spec.clock, spec.nu * spec.tau),
        system_deviation=trace_norm(final - free_system_state(spec)),
        condition1_ok=residual <= tol,
        condition1_residual=residual,
        autonomous=True,
        tolerance=tol,
        agent_gain=clock_energy_mean(after, spec.hbar, spec.nu) - clock_energy_mean(spec.clock, spec.hbar, spec.nu),
        is_clock=True,
    )
