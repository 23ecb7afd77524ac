from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


class CheckReport(BaseModel):
    """Outcome of one structural or inequality check."""
    name: str = Field(description="Check identifier")
    passed: bool = Field(description="Whether the residual is within tolerance")
    residual: float = Field(ge=0.0, description="Largest violation measured (0 when satisfied exactly)")
    tolerance: float = Field(ge=0.0, description="Tolerance the residual was compared against")
    applicable: bool = Field(default=True, description="False when the check's precondition does not hold")
    detail: str = Field(default="", description="Human-readable summary")
    samples: List[float] = Field(default_factory=list, description="Times or parameters the check was evaluated at")
    links: List["CheckReport"] = Field(default_factory=list, description="Sub-checks of a composite check")


class BoundReport(BaseModel):
    """Measured power against both power bounds for one machine."""
    machine: str = Field(description="Name of the evaluated machine")
    work: float = Field(description="Mean work W extracted from the system")
    power: float = Field(description="Mean power P = W / tau")
    tau: float = Field(gt=0.0, description="Interaction duration")
    hbar: float = Field(gt=0.0, description="Reduced Planck constant used")
    h_s_norm: float = Field(ge=0.0, description="Operator norm of the system Hamiltonian")
    delta_h_a: float = Field(ge=0.0, description="Energy fluctuation of the agent initial state")
    comm_norm: float = Field(ge=0.0, description="Trace norm of [H_A, sigma_A]")
    rhs_fluctuation: float = Field(ge=0.0, description="2 ||H_S|| dH_A / hbar")
    rhs_commutator: float = Field(ge=0.0, description="||H_S|| ||[H_A, sigma_A]||_1 / hbar")
    saturation_fluctuation: Optional[float] = Field(default=None, description="|P| / rhs_fluctuation")
    saturation_commutator: Optional[float] = Field(default=None, description="|P| / rhs_commutator")
    timescale_estimate: Optional[float] = Field(default=None, description="Work-detectability timescale hbar / (2 ||H_S||)")
    signal_to_noise: Optional[float] = Field(default=None, description="|W| / dH_A")
    tau_min: Optional[float] = Field(default=None, description="pi hbar / dH_A for clock agents")
    condition1_ok: bool = Field(description="Switch-on condition satisfied within tolerance")
    condition1_residual: float = Field(ge=0.0, description="Largest switch-on commutator residual")
    autonomous: bool = Field(default=True, description="False for externally switched models")
    expected_violation: bool = Field(default=False, description="Bound violated where no bound applies")
    tolerance: float = Field(ge=0.0, description="Tolerance used for the inequality checks")
    passed: bool = Field(description="Bound ordering holds, or violation is expected")


class ScenarioOutcome(BaseModel):
    """Result of one scenario run."""
    name: str = Field(description="Scenario name")
    kind: str = Field(description="Scenario kind")
    autonomous: bool = Field(default=True, description="Whether the scenario counts toward the overall verdict")
    passed: bool = Field(description="All checks passed and every bound held")
    bound_report: Optional[BoundReport] = Field(default=None, description="Primary (or worst-case) bound report")
    machine_reports: List[BoundReport] = Field(default_factory=list, description="Per-model reports for multi-model scenarios")
    checks: List[CheckReport] = Field(default_factory=list, description="Named checks")
    figures: Dict[str, float] = Field(default_factory=dict, description="Scenario-specific scalar results")
    parameters: Dict[str, Any] = Field(default_factory=dict, description="Resolved scenario parameters")
    artifacts: List[str] = Field(default_factory=list, description="Emitted data files")
    error: Optional[str] = Field(default=None, description="Error message when the scenario raised")
    duration_seconds: float = Field(default=0.0, ge=0.0, description="Wall-clock duration")

    @model_validator(mode="after")
    def unique_check_names(self) -> "ScenarioOutcome":
        names = [check.name for check in self.checks]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(f"Duplicate check names: {duplicates}")
        return self
