"""Scenario dispatch by kind and the catalogue behind `list-scenarios`."""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List

from pydantic_core import PydanticUndefined

from ..clockwork.lattice import EnergyDistribution
from ..shared_models import ScenarioOutcome
from .clock_scenarios import qubit_saturation, random_clock_ensemble
from .oscillators import embedded_oscillator, nonautonomous_control, twin_oscillator
from .specs import SPEC_TYPES, QubitSaturationSpec, ScenarioBase
from .triviality import commuting_triviality


@dataclass
class ScenarioRun:
    """Outcome plus the agent energy distributions a scenario emitted."""

    outcome: ScenarioOutcome
    distributions: Dict[str, EnergyDistribution] = field(default_factory=dict)


@dataclass(frozen=True)
class ScenarioEntry:
    runner: Callable[..., ScenarioOutcome]
    description: str


SCENARIOS: Dict[str, ScenarioEntry] = {
    "twin_oscillator": ScenarioEntry(
        twin_oscillator,
        "Externally switched beam splitter between two oscillators; work against the cosine law",
    ),
    "nonautonomous_control": ScenarioEntry(
        nonautonomous_control,
        "Ground-state storage delivering power 2 g omega / pi with a zero fluctuation bound",
    ),
    "embedded_oscillator": ScenarioEntry(
        embedded_oscillator,
        "The twin oscillators switched by a lattice clock carried with the storage; autonomous",
    ),
    "qubit_saturation": ScenarioEntry(
        qubit_saturation,
        "Optimal clock flipping a qubit; saturates the fluctuation bound up to 1/pi",
    ),
    "random_clock_ensemble": ScenarioEntry(
        random_clock_ensemble,
        "Seeded random clock machines checked against both bounds and the proof chain",
    ),
    "commuting_triviality": ScenarioEntry(
        commuting_triviality,
        "Interaction commuting with H_S + H_A exchanges no work; perturbed control does",
    ),
}


def describe_scenarios() -> List[Dict[str, Any]]:
    """Kind, description and default parameters of every scenario."""
    catalogue = []
    for kind, entry in SCENARIOS.items():
        defaults: Dict[str, Any] = {}
        for name, info in SPEC_TYPES[kind].model_fields.items():
            if name in ("kind", "name", "hbar", "tolerances"):
                continue
            if info.is_required():
                defaults[name] = "<required>"
            elif info.default is not PydanticUndefined:
                defaults[name] = info.default
            else:
                defaults[name] = info.default_factory()  # type: ignore[misc]
        catalogue.append({"kind": kind, "description": entry.description, "defaults": defaults})
    return catalogue


def run_scenario(spec: ScenarioBase, emit_distributions: bool = False) -> ScenarioRun:
    entry = SCENARIOS[spec.kind]  # type: ignore[attr-defined]
    if isinstance(spec, QubitSaturationSpec) and emit_distributions:
        distributions: Dict[str, EnergyDistribution] = {}
        return ScenarioRun(entry.runner(spec, distributions), distributions)
    return ScenarioRun(entry.runner(spec))
