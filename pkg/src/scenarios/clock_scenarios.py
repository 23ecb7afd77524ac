"""
Scenarios driven by the ideal clock.

`qubit_saturation` reproduces the optimal machine: an optimal clock of width L
flips a qubit through a bump of width K = ratio * L and approaches the
saturation 1/pi of the fluctuation bound as K/L shrinks. `random_clock_ensemble`
fuzzes the bounds and the proof chain over seeded random machines.
"""

import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..bounds.measurement import measure
from ..bounds.power import bound_report, check_qsl_chain
from ..clockwork.engine import ClockMachineSpec, check_clock_uncertainty, final_agent_state, final_energy
from ..clockwork.lattice import (
    EnergyDistribution,
    LatticeClock,
    calibrate_lattice,
    lattice_model,
    momentum_distribution,
)
from ..clockwork.profiles import bump_profile, build_vs_from_unitary
from ..clockwork.wavefunctions import ClockEnsemble, optimal_wavefunction, random_clock_wavefunction
from ..config.settings import lattice_tolerance, settings
from ..core.ensembles import random_density_matrix, random_hermitian, random_unitary
from ..core.operators import (
    Operator,
    UnitaryOperator,
    basis_projector,
    eigenphases,
    expectation,
    identity,
)
from ..machine.dynamics import evolve_total
from ..shared_models import BoundReport, CheckReport, ScenarioOutcome
from .outcome import build_outcome, threshold_check
from .specs import QubitSaturationSpec, RandomClockEnsembleSpec


# =============================================================================
# Qubit Saturation
# =============================================================================

def qubit_machine(spec: QubitSaturationSpec) -> ClockMachineSpec:
    """H_S = -C|0><0| + C|1><1|, rho_S = |1><1|, optimal clock on [-L, 0], bump on [0, K]."""
    hbar, nu = spec.action, settings.clock.nu
    h_s = Operator(np.diag([-spec.C, spec.C]), hermitian=True)
    if spec.commuting:
        target = UnitaryOperator(np.diag([1j, 1.0]))
    else:
        target = UnitaryOperator(np.array([[0.0, 1.0], [1.0, 0.0]]))

    grid, f = bump_profile(spec.bump_ratio * spec.L, spec.steps)
    return ClockMachineSpec(
        h_s=h_s,
        profile=build_vs_from_unitary(target, f, h_s, grid, hbar, nu),
        clock=optimal_wavefunction(spec.L, spec.clock_points),
        rho_s=basis_projector(1, 2),
        nu=nu,
        hbar=hbar,
        name=spec.label,
    )


def energy_distributions(
    machine: ClockMachineSpec,
    dx: float,
) -> Tuple[EnergyDistribution, EnergyDistribution]:
    """Agent energy distributions before and after the interaction."""
    lattice = LatticeClock.for_spec(machine, dx, window=0.0)
    return momentum_distribution(machine.clock, lattice), momentum_distribution(final_agent_state(machine), lattice)


def _report_identity(report: BoundReport) -> CheckReport:
    """(tau / timescale) * saturation = |W| / dH_A."""
    if report.timescale_estimate is None or report.saturation_fluctuation is None or report.signal_to_noise is None:
        return threshold_check("report_identity", 0.0, 0.0, "inapplicable: zero bound or zero H_S", applicable=False)
    lhs = report.tau / report.timescale_estimate * report.saturation_fluctuation
    scale = max(1.0, report.signal_to_noise)
    return threshold_check(
        "report_identity",
        abs(lhs - report.signal_to_noise),
        1e-9 * scale,
        f"(tau / t_detect) saturation = {lhs:.12g}, |W| / dH_A = {report.signal_to_noise:.12g}",
    )


def qubit_saturation(
    spec: QubitSaturationSpec,
    distributions: Optional[Dict[str, EnergyDistribution]] = None,
) -> ScenarioOutcome:
    """Optimal clock machine; fills `distributions` with before/after agent energies when given."""
    machine = qubit_machine(spec)
    measurement = measure(machine)
    report = bound_report(measurement)
    tol = settings.bounds.semi_analytic_tol
    ceiling = 2.0 * spec.C
    ratio = spec.bump_ratio
    narrow = ratio <= 0.01 + 1e-12

    checks = [
        check_clock_uncertainty(machine),
        check_qsl_chain(measurement),
        _report_identity(report),
    ]

    if spec.commuting:
        checks.append(threshold_check(
            "commuting_zero_work", abs(report.work), spec.tol("commuting_zero_work", tol), "U commutes with H_S"
        ))
    else:
        checks.append(threshold_check(
            "maximal_work",
            max(ceiling - report.work, report.work - ceiling - tol),
            spec.tol("maximal_work", 1e-6),
            f"W = {report.work:.15g}, 2C = {ceiling:.15g}",
        ))
        saturation = report.saturation_fluctuation or 0.0
        low = 1.0 / math.pi - spec.tol("saturation_window", 0.02)
        checks.append(threshold_check(
            "saturation_window",
            max(low - saturation, saturation - 1.0 / math.pi - tol),
            0.0,
            f"saturation {saturation:.12g} in [{low:.6g}, 1/pi] for K/L = {ratio:g}",
            applicable=narrow,
        ))
        product = report.tau * report.delta_h_a / (math.pi * spec.action)
        checks.append(threshold_check(
            "uncertainty_saturation",
            product - 1.0,
            spec.tol("uncertainty_saturation", 0.02),
            f"tau dH_A / (pi hbar) = {product:.12g}",
            applicable=narrow,
        ))
        checks.append(threshold_check(
            "agent_energy_bookkeeping",
            abs(measurement.agent_gain - report.work),
            spec.tol("agent_energy_bookkeeping", 1e-4 * max(1.0, ceiling)),
            f"agent gain {measurement.agent_gain:.12g}, W = {report.work:.12g}",
        ))

    figures = {
        "work": report.work,
        "power": report.power,
        "saturation_fluctuation": report.saturation_fluctuation or 0.0,
        "bump_width": ratio * spec.L,
        "tau_delta_h_a": report.tau * report.delta_h_a,
    }

    if spec.lattice_dx is not None:
        calibration = calibrate_lattice(machine, spec.lattice_dx)
        lattice = LatticeClock.for_spec(machine, spec.lattice_dx)
        model = lattice_model(machine, lattice, tolerance=calibration.tolerance)
        lattice_energy = expectation(model.h_s, evolve_total(model).rho_s_final)
        gap = abs(lattice_energy - final_energy(machine))
        figures["lattice_energy_gap"] = gap
        figures["lattice_c"] = calibration.coefficient
        checks.append(threshold_check(
            "lattice_oracle",
            gap,
            spec.tol("lattice_oracle", calibration.tolerance),
            f"lattice dx = {spec.lattice_dx:g}, {lattice.sites} sites, calibrated c = {calibration.coefficient:.4g}",
        ))

    if distributions is not None:
        before, after = energy_distributions(machine, spec.distribution_dx)
        distributions["before"], distributions["after"] = before, after
        shift = after.mean() - before.mean()
        figures["distribution_shift"] = shift
        checks.append(threshold_check(
            "distribution_shift",
            abs(shift - report.work),
            spec.tol("distribution_shift", lattice_tolerance(spec.distribution_dx, spec.C)),
            f"mean agent energy moved by {shift:.9g}",
        ))

    return build_outcome(spec, checks, [report], autonomous=True, figures=figures)


# =============================================================================
# Random Clock Ensemble
# =============================================================================

def _target_unitary(rng: np.random.Generator, dim: int) -> UnitaryOperator:
    """Haar unitary whose eigenphases stay away from the logarithm's branch cut."""
    while True:
        u = random_unitary(rng, dim)
        phases, _ = eigenphases(u)
        if np.all(math.pi - np.abs(phases) > 1e-6):
            return u


def random_clock_machine(spec: RandomClockEnsembleSpec, index: int) -> ClockMachineSpec:
    """Model `index` of the ensemble, drawn from its own generator."""
    rng = np.random.default_rng([spec.seed, index])
    hbar, nu = spec.action, settings.clock.nu

    dim = int(rng.integers(spec.dim_range[0], spec.dim_range[1] + 1))
    h_s = random_hermitian(rng, dim, norm=1.0)
    if spec.identity_target:
        target = UnitaryOperator(identity((dim,)).entries)
    else:
        target = _target_unitary(rng, dim)

    width = float(rng.uniform(*spec.width_range))
    bump_width = width * float(rng.uniform(0.05, 1.0))
    grid, f = bump_profile(bump_width)

    members = int(rng.integers(1, spec.max_members + 1))
    psis = tuple(random_clock_wavefunction(rng, width, spec.clock_points) for _ in range(members))
    weights = rng.dirichlet(np.ones(members)) if members > 1 else np.array([1.0])

    return ClockMachineSpec(
        h_s=h_s,
        profile=build_vs_from_unitary(target, f, h_s, grid, hbar, nu),
        clock=ClockEnsemble(psis, weights),
        rho_s=random_density_matrix(rng, dim),
        nu=nu,
        hbar=hbar,
        name=f"{spec.label}[{index}]",
    )


def _aggregate(name: str, checks: List[CheckReport]) -> CheckReport:
    failed = [check for check in checks if check.applicable and not check.passed]
    worst = max(checks, key=lambda check: check.residual)
    return CheckReport(
        name=name,
        passed=not failed,
        residual=worst.residual,
        tolerance=worst.tolerance,
        detail=f"{len(failed)} of {len(checks)} failed; worst residual {worst.residual:.3e}",
    )


def random_clock_ensemble(spec: RandomClockEnsembleSpec) -> ScenarioOutcome:
    reports: List[BoundReport] = []
    chains, uncertainties, lattice_reports, lattice_chains = [], [], [], []
    coefficients: List[float] = []

    for index in range(spec.n_models):
        machine = random_clock_machine(spec, index)
        measurement = measure(machine)
        reports.append(bound_report(measurement))
        chains.append(check_qsl_chain(measurement))
        uncertainties.append(check_clock_uncertainty(machine))

        if index < spec.lattice_subsample:
            calibration = calibrate_lattice(machine, spec.lattice_dx)
            coefficients.append(calibration.coefficient)
            model = lattice_model(
                machine, LatticeClock.for_spec(machine, spec.lattice_dx), tolerance=calibration.tolerance
            )
            lattice_measurement = measure(model)
            lattice_reports.append(bound_report(lattice_measurement))
            lattice_chains.append(check_qsl_chain(lattice_measurement))

    margins = [abs(r.power) - r.rhs_commutator for r in reports]
    ordering = [r.rhs_commutator - r.rhs_fluctuation for r in reports]
    checks = [
        threshold_check(
            "bound_validity",
            max(margins),
            settings.bounds.semi_analytic_tol,
            f"{sum(not r.passed for r in reports)} of {len(reports)} machines exceed ||H_S|| ||[H_A, sigma_A]||_1 / hbar",
        ),
        threshold_check(
            "bound_ordering",
            max(ordering),
            1e-12 * max(1.0, max(r.rhs_fluctuation for r in reports)),
            "commutator bound never exceeds the fluctuation bound",
        ),
        _aggregate("qsl_chain", chains),
        _aggregate("clock_uncertainty", uncertainties),
    ]
    if lattice_reports:
        lattice_passed = [
            threshold_check(r.machine, 0.0 if r.passed and r.condition1_ok else 1.0, 0.0) for r in lattice_reports
        ]
        checks.append(_aggregate("lattice_bounds", lattice_passed))
        checks.append(_aggregate("lattice_qsl_chain", lattice_chains))
    if spec.identity_target:
        checks.append(threshold_check(
            "identity_zero_power", max(abs(r.power) for r in reports), settings.bounds.semi_analytic_tol
        ))

    saturations = [r.saturation_commutator or 0.0 for r in reports]
    worst = reports[int(np.argmax(saturations))]
    figures = {
        "models": float(len(reports)),
        "worst_margin": max(margins),
        "max_saturation_commutator": max(saturations),
        "max_saturation_fluctuation": max(r.saturation_fluctuation or 0.0 for r in reports),
    }
    if coefficients:
        figures["lattice_c_max"] = max(coefficients)
    return build_outcome(spec, checks, reports, autonomous=True, figures=figures, primary=worst)
