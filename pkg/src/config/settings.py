from typing import Optional
from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class NumericsSettings(BaseSettings):
    """Tolerances used by the dense linear-algebra layer."""

    hermitian_tol: float = Field(default=1e-12, gt=0, description="Hermiticity tolerance (relative to entry scale)")
    unitary_tol: float = Field(default=1e-10, gt=0, description="Unitarity tolerance for U†U = 1")
    state_tol: float = Field(default=1e-12, gt=0, description="Trace and positivity tolerance for density matrices")
    trace_drift_tol: float = Field(
        default=1e-8,
        gt=0,
        description="Trace drift of evolved states that is renormalized away instead of rejected"
    )
    branch_cut_tol: float = Field(
        default=1e-9,
        gt=0,
        description="Eigenphases this close to -pi (but not rounding-close) are rejected by unitary_log"
    )
    branch_snap_tol: float = Field(
        default=1e-12,
        gt=0,
        description="Eigenphases within rounding of -pi are folded onto +pi"
    )
    work_crosscheck_tol: float = Field(default=1e-10, gt=0, description="Agreement of the two mean-work forms")

    model_config = SettingsConfigDict(env_prefix="NUMERICS_", env_file=".env", extra="ignore")


class ClockSettings(BaseSettings):
    """Ideal-clock engine discretization settings."""

    steps_per_unit_length: int = Field(default=512, ge=1, description="Time-ordering steps per unit of profile length")
    min_steps: int = Field(default=64, ge=1, description="Lower bound on time-ordering steps for short profiles")
    nu: float = Field(default=1.0, gt=0, description="Clock speed (natural units)")
    min_grid_points: int = Field(default=16, ge=3, description="Coarsest admissible wavefunction grid")

    model_config = SettingsConfigDict(env_prefix="CLOCK_", env_file=".env", extra="ignore")


class BoundSettings(BaseSettings):
    """Tolerances for the bound and proof-chain inequality checks."""

    semi_analytic_tol: float = Field(default=1e-9, gt=0, description="Absolute tolerance on semi-analytic models")
    lattice_tol_coefficient: float = Field(
        default=100.0,
        gt=0,
        description="c in the lattice tolerance c*dx^2 (scaled by the system energy)"
    )
    relation_tol: float = Field(default=1e-10, gt=0, description="Tolerance of ||[H,s]||_1 <= 2 dH")
    uncertainty_tol: float = Field(default=1e-6, gt=0, description="Tolerance of the clock uncertainty relation")
    lattice_safety: float = Field(
        default=4.0,
        ge=1,
        description="Multiple of the Richardson error estimate used as the calibrated lattice tolerance"
    )
    condition_samples: int = Field(default=8, ge=1, description="Time samples for Condition 1 scans")

    model_config = SettingsConfigDict(env_prefix="BOUNDS_", env_file=".env", extra="ignore")


class RunnerSettings(BaseSettings):
    """Scenario runner settings."""

    output_dir: Path = Field(default=Path("powerbound-output"), description="Directory for reports and CSV files")
    workers: int = Field(default=4, ge=1, description="Concurrent scenario workers")
    schema_tag: str = Field(default="powerbound-report/1", description="Report schema tag")

    model_config = SettingsConfigDict(env_prefix="POWERBOUND_", env_file=".env", extra="ignore")


class LoggingSettings(BaseSettings):
    level: str = Field(default="INFO", description="Logging level")

    @field_validator("level")
    @classmethod
    def validate_level(cls, v: str) -> str:
        v = v.upper()
        if v not in ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]:
            raise ValueError("Logging level must be DEBUG, INFO, WARNING, ERROR or CRITICAL")
        return v

    model_config = SettingsConfigDict(env_prefix="LOGGING_", env_file=".env", extra="ignore")


class MetricsSettings(BaseSettings):
    enabled: bool = Field(default=True, description="Enable metrics collection")
    textfile: str = Field(default="metrics.prom", description="Prometheus text file written next to the report")

    model_config = SettingsConfigDict(env_prefix="METRICS_", env_file=".env", extra="ignore")


class Settings(BaseSettings):
    """Main settings combining all configuration sections."""

    numerics: NumericsSettings = Field(default_factory=NumericsSettings)
    clock: ClockSettings = Field(default_factory=ClockSettings)
    bounds: BoundSettings = Field(default_factory=BoundSettings)
    runner: RunnerSettings = Field(default_factory=RunnerSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)
    metrics: MetricsSettings = Field(default_factory=MetricsSettings)

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", case_sensitive=False, extra="ignore")


def lattice_tolerance(dx: float, energy_scale: Optional[float] = None) -> float:
    """Tolerance c*dx^2 for lattice comparisons, scaled by the system energy."""
    scale = max(1.0, energy_scale or 1.0)
    return settings.bounds.lattice_tol_coefficient * dx * dx * scale


# Global settings instance
settings = Settings()
