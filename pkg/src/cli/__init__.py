"""
CLI Package

Declarative scenario runner: YAML run configs, concurrent execution,
JSON reports with a reproducibility digest and plot-ready CSV files.
"""

from .models import RunConfig, RunReport, overall_pass
from .config_parser import ConfigError, ConfigIssue, parse_config, load_config
from .commands import run, sweep, expand_sweep
from .output import (
    DISTRIBUTION_COLUMNS,
    SWEEP_COLUMNS,
    REPORT_FILE,
    SWEEP_FILE,
    load_report,
    resolve_output_dir,
)

__all__ = [
    "RunConfig",
    "RunReport",
    "overall_pass",
    "ConfigError",
    "ConfigIssue",
    "parse_config",
    "load_config",
    "run",
    "sweep",
    "expand_sweep",
    "DISTRIBUTION_COLUMNS",
    "SWEEP_COLUMNS",
    "REPORT_FILE",
    "SWEEP_FILE",
    "load_report",
    "resolve_output_dir",
]
