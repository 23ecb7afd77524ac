"""
Machine Package

The self-contained bipartite machine, its joint evolution, the work and power
it delivers, and the structural conditions an autonomous machine must meet.
"""

from .model import BipartiteModel, ConditionWindow
from .dynamics import (
    EvolutionResult,
    WorkMismatchError,
    sigma_free,
    system_free,
    evolve_total,
    mean_work,
    mean_power,
    agent_energy_gain,
)
from .conditions import (
    condition1_residual,
    check_condition1,
    check_factorization,
    check_avg_energy_conservation,
    check_switch_off,
    check_conservation_triviality,
)

__all__ = [
    "BipartiteModel",
    "ConditionWindow",
    "EvolutionResult",
    "WorkMismatchError",
    "sigma_free",
    "system_free",
    "evolve_total",
    "mean_work",
    "mean_power",
    "agent_energy_gain",
    "condition1_residual",
    "check_condition1",
    "check_factorization",
    "check_avg_energy_conservation",
    "check_switch_off",
    "check_conservation_triviality",
]
