import hashlib
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config.settings import settings
from ..scenarios.specs import ScenarioSpec
from ..shared_models import ScenarioOutcome


# =============================================================================
# JSON Text
# =============================================================================

def _float_text(value: float) -> str:
    """17 significant digits, the same precision as the CSV files."""
    if not math.isfinite(value):
        return "null"
    text = format(value, ".17g")
    return text if any(c in text for c in ".en") else text + ".0"


def _wrap(opening: str, closing: str, parts: List[str], indent: Optional[int], depth: int) -> str:
    if not parts:
        return opening + closing
    if indent is None:
        return opening + ",".join(parts) + closing
    pad = "\n" + " " * (indent * (depth + 1))
    return opening + pad + ("," + pad).join(parts) + "\n" + " " * (indent * depth) + closing


def dump_json(value: Any, indent: Optional[int] = None, sort_keys: bool = False, _depth: int = 0) -> str:
    """json.dumps for JSON-mode payloads, writing every float with '.17g'."""
    if value is None or isinstance(value, (bool, int, str)):
        return json.dumps(value)
    if isinstance(value, float):
        return _float_text(value)
    if isinstance(value, dict):
        keys = sorted(value) if sort_keys else list(value)
        colon = ":" if indent is None else ": "
        parts = [f"{json.dumps(str(k))}{colon}{dump_json(value[k], indent, sort_keys, _depth + 1)}" for k in keys]
        return _wrap("{", "}", parts, indent, _depth)
    if isinstance(value, (list, tuple)):
        return _wrap("[", "]", [dump_json(item, indent, sort_keys, _depth + 1) for item in value], indent, _depth)
    raise TypeError(f"Cannot write {type(value).__name__} as JSON")


# =============================================================================
# Run Configuration
# =============================================================================

class RunConfig(BaseModel):
    """A run: the scenario blocks plus run-level defaults they inherit."""

    model_config = ConfigDict(extra="forbid")

    scenarios: List[ScenarioSpec] = Field(min_length=1, description="Scenario blocks, executed in order")
    hbar: Optional[float] = Field(default=None, gt=0.0, description="Run-level hbar inherited by every scenario")
    tolerances: Dict[str, float] = Field(default_factory=dict, description="Run-level tolerance overrides")
    output_dir: Optional[Path] = Field(default=None, description="Directory for the report and CSV files")
    emit_distributions: bool = Field(default=False, description="Write agent energy distributions as CSV")
    workers: Optional[int] = Field(default=None, ge=1, description="Concurrent scenario workers")

    @field_validator("tolerances")
    @classmethod
    def validate_tolerances(cls, v: Dict[str, float]) -> Dict[str, float]:
        for key, value in v.items():
            if not value > 0:
                raise ValueError(f"Tolerance '{key}' must be positive")
        return v

    @model_validator(mode="after")
    def inherit_run_defaults(self) -> "RunConfig":
        # Scenario-level values win over run-level ones.
        for spec in self.scenarios:
            if spec.hbar is None and self.hbar is not None:
                spec.hbar = self.hbar
            if self.tolerances:
                spec.tolerances = {**self.tolerances, **spec.tolerances}
        return self


# =============================================================================
# Run Report
# =============================================================================

class RunReport(BaseModel):
    """Everything a run produced, in scenario order."""

    schema_tag: str = Field(default_factory=lambda: settings.runner.schema_tag, description="Versioned report schema")
    passed: bool = Field(description="Every autonomous scenario passed and none raised")
    outcomes: List[ScenarioOutcome] = Field(default_factory=list, description="One outcome per scenario block")
    artifacts: List[str] = Field(default_factory=list, description="Run-level data files, relative to the output directory")
    timings: Dict[str, float] = Field(default_factory=dict, description="Wall-clock seconds per scenario and in total")
    digest: str = Field(default="", description="sha256 of the report with timing fields removed")

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def comparable(self) -> Dict[str, Any]:
        """The report without wall-clock data or its own digest."""
        payload = self.model_dump(mode="json", exclude={"timings", "digest"})
        for outcome in payload["outcomes"]:
            outcome.pop("duration_seconds", None)
        return payload

    def compute_digest(self) -> str:
        text = dump_json(self.comparable(), sort_keys=True)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


def overall_pass(outcomes: List[ScenarioOutcome]) -> bool:
    """Non-autonomous controls never decide the verdict; a scenario that raised always does."""
    return all(outcome.passed for outcome in outcomes if outcome.autonomous or outcome.error is not None)
