"""
Quantities every power bound is built from, extracted once per machine.

`measure` dispatches on the machine type: dense bipartite models are evolved
directly, clock machines register their semi-analytic implementation from
the clockwork package.
"""

from dataclasses import dataclass
from functools import singledispatch
from typing import Any

import numpy as np

from ..core.operators import commutator, expectation, operator_norm, trace_norm, variance
from ..machine.conditions import check_condition1
from ..machine.dynamics import evolve_total, mean_work, sigma_free
from ..machine.model import BipartiteModel


@dataclass(frozen=True)
class MachineMeasurement:
    """Scalar summary of one machine run."""

    name: str
    work: float
    tau: float
    hbar: float
    h_s_norm: float
    delta_h_a: float
    comm_norm: float
    agent_displacement: float
    system_deviation: float
    condition1_ok: bool
    condition1_residual: float
    autonomous: bool
    tolerance: float
    agent_gain: float = float("nan")
    is_clock: bool = False

    @property
    def power(self) -> float:
        return self.work / self.tau


@singledispatch
def measure(machine: Any) -> MachineMeasurement:
    raise TypeError(f"Cannot measure object of type {type(machine).__name__}")


@measure.register
def _measure_bipartite(model: BipartiteModel) -> MachineMeasurement:
    result = evolve_total(model)
    condition = check_condition1(model)
    displaced = sigma_free(model, -model.tau)

    return MachineMeasurement(
        name=model.name,
        work=mean_work(model, result),
        tau=model.tau,
        hbar=model.hbar,
        h_s_norm=operator_norm(model.h_s),
        delta_h_a=float(np.sqrt(variance(model.h_a, model.sigma_a))),
        comm_norm=trace_norm(commutator(model.h_a, model.sigma_a)),
        agent_displacement=trace_norm(model.sigma_a - displaced),
        system_deviation=trace_norm(result.rho_s_final - result.rho_s_free),
        condition1_ok=condition.passed,
        condition1_residual=condition.residual,
        autonomous=model.autonomous,
        tolerance=model.tolerance,
        agent_gain=expectation(model.h_a, result.sigma_a_final) - expectation(model.h_a, model.sigma_a),
    )


@measure.register
def _measure_passthrough(measurement: MachineMeasurement) -> MachineMeasurement:
    return measurement
