"""
Clockwork Package

The ideal clock-driven machine: clock wavefunctions, interaction profiles,
the semi-analytic engine and the finite lattice it is checked against.
"""

from .wavefunctions import (
    ClockWavefunction,
    ClockEnsemble,
    ClockState,
    as_ensemble,
    uniform_grid,
    clock_energy_mean,
    clock_energy_variance,
    clock_commutator_trace_norm,
    clock_displacement,
    optimal_wavefunction,
    kinetic_ground_state,
    variational_minimize,
    random_clock_wavefunction,
    wavefunction_table,
)
from .profiles import (
    InteractionProfile,
    profile_steps,
    bump_profile,
    build_vs_from_unitary,
    effective_unitary,
    dressed_unitary,
)
from .engine import (
    ClockMachineSpec,
    final_system_state,
    final_energy,
    free_system_state,
    clock_work,
    final_agent_state,
    interaction_overlap,
    clock_condition1_residual,
    check_clock_condition1,
    check_clock_switch_off,
    check_clock_uncertainty,
)
from .lattice import (
    LatticeClock,
    LatticeWrapError,
    LatticeCalibration,
    EnergyDistribution,
    lattice_model,
    lattice_simulate,
    calibrate_lattice,
    richardson_calibration,
    momentum_distribution,
)

__all__ = [
    "ClockWavefunction",
    "ClockEnsemble",
    "ClockState",
    "as_ensemble",
    "uniform_grid",
    "clock_energy_mean",
    "clock_energy_variance",
    "clock_commutator_trace_norm",
    "clock_displacement",
    "optimal_wavefunction",
    "kinetic_ground_state",
    "variational_minimize",
    "random_clock_wavefunction",
    "wavefunction_table",
    "InteractionProfile",
    "profile_steps",
    "bump_profile",
    "build_vs_from_unitary",
    "effective_unitary",
    "dressed_unitary",
    "ClockMachineSpec",
    "final_system_state",
    "final_energy",
    "free_system_state",
    "clock_work",
    "final_agent_state",
    "interaction_overlap",
    "clock_condition1_residual",
    "check_clock_condition1",
    "check_clock_switch_off",
    "check_clock_uncertainty",
    "LatticeClock",
    "LatticeWrapError",
    "LatticeCalibration",
    "EnergyDistribution",
    "lattice_model",
    "lattice_simulate",
    "calibrate_lattice",
    "richardson_calibration",
    "momentum_distribution",
]
