"""
Structural conditions of an autonomous machine.

Every check returns a `CheckReport` carrying the worst residual it measured;
none of them raise on failure.
"""

from typing import Iterable, Optional

import numpy as np

from ..core.operators import (
    DensityMatrix,
    commutator,
    expectation,
    operator_norm,
    tensor,
    trace_norm,
)
from ..shared_models import CheckReport
from .dynamics import EvolutionResult, evolve_total, sigma_free, system_free
from .model import BipartiteModel


def _report(name: str, residual: float, tol: float, samples: Iterable[float] = (), detail: str = "") -> CheckReport:
    residual = max(0.0, float(residual))
    return CheckReport(
        name=name,
        passed=residual <= tol,
        residual=residual,
        tolerance=tol,
        samples=[float(t) for t in samples],
        detail=detail or f"max residual {residual:.3e} (tol {tol:.1e})",
    )


# =============================================================================
# Switch-On Condition
# =============================================================================

def condition1_residual(model: BipartiteModel, sigma_t: DensityMatrix) -> float:
    """max over matrix units E_kl of ||[V, E_kl (x) sigma]||_F.

    The Frobenius norm bounds the operator norm from above. With V reshaped to
    V[i, a, j, b] the commutator splits into A_k = V[:, :, k, :] sigma placed in
    column block l and B_l = sigma V[l, :, :, :] placed in row block k, which
    overlap only in block (k, l).
    """
    d_s, d_a = model.dims
    v4 = model.v.entries.reshape(d_s, d_a, d_s, d_a)
    sigma = sigma_t.entries

    left_sq = np.empty(d_s)
    right_sq = np.empty(d_s)
    diag_left = np.empty((d_s, d_a * d_a), dtype=complex)
    diag_right = np.empty((d_s, d_a * d_a), dtype=complex)
    for k in range(d_s):
        left = np.einsum("iab,bc->iac", v4[:, :, k, :], sigma)
        right = np.einsum("ab,bmc->mac", sigma, v4[k])
        left_sq[k] = np.sum(np.abs(left) ** 2)
        right_sq[k] = np.sum(np.abs(right) ** 2)
        diag_left[k] = left[k].ravel()
        diag_right[k] = right[k].ravel()
    overlap = np.real(diag_left.conj() @ diag_right.T)

    squared = left_sq[:, None] + right_sq[None, :] - 2.0 * overlap
    return float(np.sqrt(max(0.0, float(np.max(squared)))))


def check_condition1(
    model: BipartiteModel,
    t_samples: Optional[Iterable[float]] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    """[V, rho (x) sigma_A(t)] = 0 for every system state and sampled t <= 0."""
    times = np.asarray(list(t_samples) if t_samples is not None else model.window.past_times(model.tau), dtype=float)
    tol = model.tolerance if tol is None else tol
    if np.any(times > 0):
        raise ValueError("Switch-on condition is only defined for t <= 0")

    residual = max(condition1_residual(model, sigma_free(model, t)) for t in times)
    return _report("condition1", residual, tol, times)


def check_factorization(model: BipartiteModel, t: float, tol: Optional[float] = None) -> CheckReport:
    """||e^{-iHt}(rho (x) sigma)e^{iHt} - rho(t) (x) sigma(t)||_1 for t <= 0."""
    if t > 0:
        raise ValueError("Factorization is only asserted for t <= 0")
    tol = model.tolerance if tol is None else tol
    joint = evolve_total(model, t).theta_tau
    product = tensor(system_free(model, t), sigma_free(model, t))
    return _report("factorization", trace_norm(joint - product), tol, [t])


# =============================================================================
# Energy Bookkeeping and Switch-Off
# =============================================================================

def check_avg_energy_conservation(
    model: BipartiteModel,
    tol: Optional[float] = None,
    result: Optional[EvolutionResult] = None,
) -> CheckReport:
    """tr (H_S + H_A) Theta(tau) = tr (H_S + H_A) Theta(0)."""
    tol = model.tolerance if tol is None else tol
    result = result if result is not None else evolve_total(model)
    before = expectation(model.h_s, model.rho_s) + expectation(model.h_a, model.sigma_a)
    after = expectation(model.h_s, result.rho_s_final) + expectation(model.h_a, result.sigma_a_final)
    return _report("avg_energy_conservation", abs(after - before), tol, [result.t])


def check_switch_off(
    model: BipartiteModel,
    t_samples: Optional[Iterable[float]] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    """[V, Theta(t)] = 0 at sampled t >= tau. Samples before tau fail the check."""
    times = np.asarray(list(t_samples) if t_samples is not None else model.window.future_times(model.tau), dtype=float)
    tol = model.tolerance if tol is None else tol

    residual = max(operator_norm(commutator(model.interaction, evolve_total(model, t).theta_tau)) for t in times)
    early = times[times < model.tau - 1e-12 * max(1.0, model.tau)]
    if early.size:
        return CheckReport(
            name="switch_off",
            passed=False,
            residual=residual,
            tolerance=tol,
            samples=[float(t) for t in times],
            detail=f"{early.size} sample(s) precede tau = {model.tau:.6g}, earliest t = {float(early.min()):.6g}",
        )
    return _report("switch_off", residual, tol, times)


# =============================================================================
# Commuting Interactions
# =============================================================================

def check_conservation_triviality(model: BipartiteModel, tol: Optional[float] = None) -> CheckReport:
    """With [H_0, V] = 0 and the switch-on condition, Theta(t) stays rho(t) (x) sigma(t)."""
    tol = model.tolerance if tol is None else tol
    name = "conservation_triviality"

    commuting = operator_norm(commutator(model.h_free, model.interaction))
    switch_on = check_condition1(model, tol=tol)
    if commuting > tol or not switch_on.passed:
        return CheckReport(
            name=name,
            passed=False,
            applicable=False,
            residual=max(commuting, switch_on.residual),
            tolerance=tol,
            detail=(
                f"inapplicable: ||[H_0, V]|| = {commuting:.3e}, "
                f"switch-on residual {switch_on.residual:.3e}"
            ),
        )

    times = model.window.interior_times(model.tau)
    residual = 0.0
    for t in times:
        joint = evolve_total(model, t).theta_tau
        product = tensor(system_free(model, t), sigma_free(model, t))
        residual = max(residual, trace_norm(joint - product))
    return _report(name, residual, tol, times)
