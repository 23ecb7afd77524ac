"""
Bounds Package

The fluctuation and commutator power bounds, the inequality chain they rest
on, and the bound report assembled for every machine.
"""

from .measurement import MachineMeasurement, measure
from .power import (
    bound_fluctuation,
    bound_commutator,
    check_commutator_fluctuation_relation,
    check_qsl_chain,
    detectability_timescale,
    bound_report,
    verify,
)

__all__ = [
    "MachineMeasurement",
    "measure",
    "bound_fluctuation",
    "bound_commutator",
    "check_commutator_fluctuation_relation",
    "check_qsl_chain",
    "detectability_timescale",
    "bound_report",
    "verify",
]
