"""
Utilities Package

Prometheus instrumentation for scenario runs: counters, durations, errors
and the text-file export written next to each report.
"""

from .metrics import (
    setup_metrics,
    get_metrics,
    write_metrics,
    track_scenario,
    record_bound_check,
    record_error,
    get_metrics_summary,
)

__all__ = [
    "setup_metrics",
    "get_metrics",
    "write_metrics",
    "track_scenario",
    "record_bound_check",
    "record_error",
    "get_metrics_summary",
]
