"""
Scenarios Package

Canned experiments: the twin oscillators with their non-autonomous control
and their clock-switched embedding, the saturating qubit clock, a seeded
random clock ensemble and the commuting triviality case.
"""

from .specs import (
    ScenarioSpec,
    TwinOscillatorSpec,
    NonautonomousControlSpec,
    EmbeddedOscillatorSpec,
    QubitSaturationSpec,
    RandomClockEnsembleSpec,
    CommutingTrivialitySpec,
    SPEC_TYPES,
)
from .oscillators import (
    TruncationError,
    oscillator_model,
    embedded_oscillator_model,
    twin_oscillator,
    nonautonomous_control,
    embedded_oscillator,
)
from .clock_scenarios import (
    qubit_machine,
    qubit_saturation,
    energy_distributions,
    random_clock_machine,
    random_clock_ensemble,
)
from .triviality import commuting_triviality
from .registry import ScenarioRun, SCENARIOS, describe_scenarios, run_scenario

__all__ = [
    "ScenarioSpec",
    "TwinOscillatorSpec",
    "NonautonomousControlSpec",
    "EmbeddedOscillatorSpec",
    "QubitSaturationSpec",
    "RandomClockEnsembleSpec",
    "CommutingTrivialitySpec",
    "SPEC_TYPES",
    "TruncationError",
    "oscillator_model",
    "twin_oscillator",
    "nonautonomous_control",
    "embedded_oscillator_model",
    "embedded_oscillator",
    "qubit_machine",
    "qubit_saturation",
    "energy_distributions",
    "random_clock_machine",
    "random_clock_ensemble",
    "commuting_triviality",
    "ScenarioRun",
    "SCENARIOS",
    "describe_scenarios",
    "run_scenario",
]
