"""Joint evolution of a bipartite machine and the work it exchanges."""

from dataclasses import dataclass
from typing import Optional

from ..config.settings import settings
from ..core.operators import DensityMatrix, expectation, partial_trace, propagator
from .model import BipartiteModel


class WorkMismatchError(ArithmeticError):
    """Raised when the two equivalent forms of the mean work disagree."""


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    """Joint state at time t with both reductions and the free system reference."""

    t: float
    theta_tau: DensityMatrix
    rho_s_final: DensityMatrix
    sigma_a_final: DensityMatrix
    rho_s_free: DensityMatrix


def _conjugate(state: DensityMatrix, u) -> DensityMatrix:
    return DensityMatrix.from_matrix(u @ state.entries @ u.conj().T, state.dims)


def sigma_free(model: BipartiteModel, t: float) -> DensityMatrix:
    """Agent state evolved by H_A alone from t0 = 0."""
    if t == 0:
        return model.sigma_a
    return _conjugate(model.sigma_a, propagator(model.h_a, t, model.hbar).entries)


def system_free(model: BipartiteModel, t: float) -> DensityMatrix:
    """System state evolved by H_S alone from t0 = 0."""
    if t == 0:
        return model.rho_s
    return _conjugate(model.rho_s, propagator(model.h_s, t, model.hbar).entries)


def evolve_total(model: BipartiteModel, t: Optional[float] = None) -> EvolutionResult:
    """Evolve rho_S (x) sigma_A under the full Hamiltonian to time t (default tau)."""
    t = model.tau if t is None else t
    theta = _conjugate(model.initial_state, propagator(model.h_total, t, model.hbar).entries)
    return EvolutionResult(
        t=t,
        theta_tau=theta,
        rho_s_final=partial_trace(theta, 0),
        sigma_a_final=partial_trace(theta, 1),
        rho_s_free=system_free(model, t),
    )


def mean_work(model: BipartiteModel, result: Optional[EvolutionResult] = None) -> float:
    """W = tr H_S (rho_S - rho_S'(tau)), cross-checked against tr H_S (rho_S(tau) - rho_S'(tau))."""
    result = result if result is not None else evolve_total(model)
    final = expectation(model.h_s, result.rho_s_final)
    work = expectation(model.h_s, model.rho_s) - final
    reference = expectation(model.h_s, result.rho_s_free) - final

    scale = max(1.0, abs(expectation(model.h_s, model.rho_s)))
    if abs(work - reference) > settings.numerics.work_crosscheck_tol * scale:
        raise WorkMismatchError(f"Work forms disagree: {work!r} vs {reference!r}")
    return work


def mean_power(model: BipartiteModel, result: Optional[EvolutionResult] = None) -> float:
    """P = W / tau."""
    return mean_work(model, result) / model.tau


def agent_energy_gain(model: BipartiteModel, result: Optional[EvolutionResult] = None) -> float:
    """tr H_A (sigma_A'(tau) - sigma_A)."""
    result = result if result is not None else evolve_total(model)
    return expectation(model.h_a, result.sigma_a_final) - expectation(model.h_a, model.sigma_a)
