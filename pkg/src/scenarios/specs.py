import math
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# =============================================================================
# Shared Fields
# =============================================================================

class ScenarioBase(BaseModel):
    """Fields every scenario kind accepts."""

    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = Field(default=None, description="Label used in reports (defaults to the kind)")
    hbar: Optional[float] = Field(default=None, gt=0.0, description="Reduced Planck constant; inherits the run-level value")
    tolerances: Dict[str, float] = Field(default_factory=dict, description="Per-check tolerance overrides")

    @field_validator("tolerances")
    @classmethod
    def validate_tolerances(cls, v: Dict[str, float]) -> Dict[str, float]:
        for key, value in v.items():
            if not value > 0:
                raise ValueError(f"Tolerance '{key}' must be positive")
        return v

    @property
    def label(self) -> str:
        return self.name or self.kind  # type: ignore[attr-defined]

    @property
    def action(self) -> float:
        return self.hbar if self.hbar is not None else 1.0

    def tol(self, check: str, default: float) -> float:
        return self.tolerances.get(check, default)


def _populations(values: List[float]) -> List[float]:
    if not values:
        raise ValueError("Populations must not be empty")
    if any(p < 0 for p in values):
        raise ValueError("Populations must be non-negative")
    if abs(sum(values) - 1.0) > 1e-12:
        raise ValueError(f"Populations must sum to 1, got {sum(values)!r}")
    return values


def _positive_list(values: List[float], what: str) -> List[float]:
    if not values:
        raise ValueError(f"At least one {what} is required")
    if any(not v > 0 for v in values):
        raise ValueError(f"Every {what} must be positive")
    return values


def _odd_points(v: int) -> int:
    if v < 3 or v % 2 == 0:
        raise ValueError(f"Grid point counts must be odd and >= 3, got {v}")
    return v


# =============================================================================
# Oscillator Scenarios
# =============================================================================

class TwinOscillatorSpec(ScenarioBase):
    """Two resonant oscillators coupled by a beam splitter that is switched on for tau."""

    kind: Literal["twin_oscillator"] = "twin_oscillator"
    omega: float = Field(default=1.0, gt=0.0, description="Common oscillator frequency")
    g: float = Field(default=1.0, gt=0.0, description="Beam-splitter coupling strength")
    taus: List[float] = Field(default_factory=lambda: [math.pi / 2], description="Interaction durations to evaluate")
    system_populations: List[float] = Field(default_factory=lambda: [0.0, 1.0], description="Fock populations of rho_S")
    storage_populations: List[float] = Field(default_factory=lambda: [1.0], description="Fock populations of sigma_W")
    n_trunc: Optional[int] = Field(default=None, ge=1, description="Levels per oscillator (default: max excitation + 1)")

    @field_validator("system_populations", "storage_populations")
    @classmethod
    def validate_populations(cls, v: List[float]) -> List[float]:
        return _populations(v)

    @field_validator("taus")
    @classmethod
    def validate_taus(cls, v: List[float]) -> List[float]:
        return _positive_list(v, "tau")


class NonautonomousControlSpec(ScenarioBase):
    """Externally switched oscillators with the storage in its ground state."""

    kind: Literal["nonautonomous_control"] = "nonautonomous_control"
    omega: float = Field(default=1.0, gt=0.0, description="Common oscillator frequency")
    couplings: List[float] = Field(default_factory=lambda: [1.0, 2.0, 4.0, 8.0], description="Coupling strengths g")
    system_populations: List[float] = Field(default_factory=lambda: [0.0, 1.0], description="Fock populations of rho_S")

    @field_validator("system_populations")
    @classmethod
    def validate_populations(cls, v: List[float]) -> List[float]:
        return _populations(v)

    @field_validator("couplings")
    @classmethod
    def validate_couplings(cls, v: List[float]) -> List[float]:
        return _positive_list(v, "coupling")


class EmbeddedOscillatorSpec(ScenarioBase):
    """Twin oscillators whose beam splitter is switched by a lattice clock travelling with the storage."""

    kind: Literal["embedded_oscillator"] = "embedded_oscillator"
    omega: float = Field(default=1.0, gt=0.0, description="Common oscillator frequency")
    theta: float = Field(default=math.pi / 2, gt=0.0, description="Beam-splitter angle imprinted by one clock pass")
    system_populations: List[float] = Field(default_factory=lambda: [0.0, 1.0], description="Fock populations of rho_S")
    storage_populations: List[float] = Field(default_factory=lambda: [1.0], description="Fock populations of sigma_W")
    n_trunc: Optional[int] = Field(default=None, ge=1, description="Levels per oscillator (default: max excitation + 1)")
    clock_width: float = Field(default=0.5, gt=0.0, description="Support width K of the optimal clock")
    profile_width: float = Field(default=0.5, gt=0.0, description="Width L of the switching window")
    clock_points: int = Field(default=401, description="Clock wavefunction grid points (odd)")
    dx: float = Field(default=0.05, gt=0.0, description="Lattice spacing of the clock")

    @field_validator("system_populations", "storage_populations")
    @classmethod
    def validate_populations(cls, v: List[float]) -> List[float]:
        return _populations(v)

    @field_validator("clock_points")
    @classmethod
    def validate_clock_points(cls, v: int) -> int:
        return _odd_points(v)


# =============================================================================
# Clock Scenarios
# =============================================================================

class QubitSaturationSpec(ScenarioBase):
    """Qubit H_S = diag(-C, C) flipped by an optimal clock sweeping a narrow bump."""

    kind: Literal["qubit_saturation"] = "qubit_saturation"
    C: float = Field(default=1.0, gt=0.0, description="Qubit energy scale, ||H_S|| = C")
    L: float = Field(default=1.0, gt=0.0, description="Clock support width")
    bump_ratio: float = Field(default=0.01, gt=0.0, le=1.0, description="Bump width K as a fraction of L")
    steps: int = Field(default=4096, ge=1, description="Time-ordering steps across the bump")
    clock_points: int = Field(default=2001, description="Clock wavefunction grid points (odd)")
    commuting: bool = Field(default=False, description="Use a target unitary commuting with H_S (zero work)")
    distribution_dx: float = Field(default=0.01, gt=0.0, description="Lattice spacing for agent energy distributions")
    lattice_dx: Optional[float] = Field(default=None, gt=0.0, description="Cross-check against a lattice of this spacing")

    @field_validator("clock_points")
    @classmethod
    def validate_clock_points(cls, v: int) -> int:
        return _odd_points(v)


class RandomClockEnsembleSpec(ScenarioBase):
    """Seeded random clock machines checked against both bounds and the proof chain."""

    kind: Literal["random_clock_ensemble"] = "random_clock_ensemble"
    seed: int = Field(description="Root seed; model i draws from default_rng([seed, i])")
    n_models: int = Field(default=200, ge=1, description="Number of random machines")
    dim_range: Tuple[int, int] = Field(default=(2, 6), description="Inclusive range of system dimensions")
    width_range: Tuple[float, float] = Field(default=(0.5, 2.0), description="Range of clock support widths")
    clock_points: int = Field(default=401, description="Clock wavefunction grid points (odd)")
    max_members: int = Field(default=3, ge=1, description="Largest number of wavefunctions in a clock mixture")
    identity_target: bool = Field(default=False, description="Use U = 1 for every draw")
    lattice_subsample: int = Field(default=2, ge=0, description="Models also checked on a lattice")
    lattice_dx: float = Field(default=0.05, gt=0.0, description="Lattice spacing for the subsample")

    @field_validator("clock_points")
    @classmethod
    def validate_clock_points(cls, v: int) -> int:
        return _odd_points(v)

    @model_validator(mode="after")
    def validate_ranges(self) -> "RandomClockEnsembleSpec":
        low, high = self.dim_range
        if low < 1 or high < low:
            raise ValueError(f"dim_range must satisfy 1 <= low <= high, got {self.dim_range}")
        left, right = self.width_range
        if not 0 < left <= right:
            raise ValueError(f"width_range must satisfy 0 < low <= high, got {self.width_range}")
        return self


class CommutingTrivialitySpec(ScenarioBase):
    """Lattice machine with [H_0, V] = 0, and a perturbed control that breaks it."""

    kind: Literal["commuting_triviality"] = "commuting_triviality"
    seed: int = Field(description="Seed for the clock state and interaction mode")
    sites: int = Field(default=31, description="Lattice sites (odd)")
    dx: float = Field(default=0.1, gt=0.0, description="Lattice spacing")
    C: float = Field(default=1.0, gt=0.0, description="Qubit energy scale")
    tau: float = Field(default=1.4, gt=0.0, description="Interaction duration")
    strength: float = Field(default=1.0, gt=0.0, description="Commuting interaction strength")
    perturbation: float = Field(default=0.5, gt=0.0, description="Strength of the non-commuting control term")

    @field_validator("sites")
    @classmethod
    def validate_sites(cls, v: int) -> int:
        return _odd_points(v)


ScenarioSpec = Annotated[
    Union[
        TwinOscillatorSpec,
        NonautonomousControlSpec,
        EmbeddedOscillatorSpec,
        QubitSaturationSpec,
        RandomClockEnsembleSpec,
        CommutingTrivialitySpec,
    ],
    Field(discriminator="kind"),
]

SPEC_TYPES = {
    "twin_oscillator": TwinOscillatorSpec,
    "nonautonomous_control": NonautonomousControlSpec,
    "embedded_oscillator": EmbeddedOscillatorSpec,
    "qubit_saturation": QubitSaturationSpec,
    "random_clock_ensemble": RandomClockEnsembleSpec,
    "commuting_triviality": CommutingTrivialitySpec,
}
