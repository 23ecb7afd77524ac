import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

from prometheus_client import CollectorRegistry, Counter, Histogram, Info, generate_latest, write_to_textfile


# =============================================================================
# Metrics Registry
# =============================================================================

# Create a custom registry for the application
metrics_registry = CollectorRegistry()

# =============================================================================
# Scenario Metrics
# =============================================================================

# Scenario counters
powerbound_scenarios_total = Counter(
    'powerbound_scenarios_total',
    'Total number of scenarios executed',
    ['kind', 'status'],
    registry=metrics_registry
)

# Scenario duration histogram
powerbound_scenario_duration_seconds = Histogram(
    'powerbound_scenario_duration_seconds',
    'Scenario wall-clock duration in seconds',
    ['kind'],
    buckets=[0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 120.0],
    registry=metrics_registry
)

# Bound checks by outcome
powerbound_bound_checks_total = Counter(
    'powerbound_bound_checks_total',
    'Total number of machines checked against the power bounds',
    ['result'],
    registry=metrics_registry
)

# =============================================================================
# Error Metrics
# =============================================================================

powerbound_errors_total = Counter(
    'powerbound_errors_total',
    'Total number of errors',
    ['error_type', 'component'],
    registry=metrics_registry
)

# =============================================================================
# Application Info
# =============================================================================

powerbound_app_info = Info(
    'powerbound_app',
    'powerbound runner information',
    registry=metrics_registry
)

# =============================================================================
# Context Managers for Timing
# =============================================================================

@contextmanager
def track_scenario(kind: str) -> Iterator[Dict[str, str]]:
    """Time a scenario; the caller sets state["status"] to "passed" or "failed"."""

    state = {"status": "passed"}
    start_time = time.time()
    try:
        yield state
    except Exception as e:
        state["status"] = "error"
        record_error(type(e).__name__, "scenario")
        raise
    finally:
        duration = time.time() - start_time
        powerbound_scenario_duration_seconds.labels(kind=kind).observe(duration)
        powerbound_scenarios_total.labels(kind=kind, status=state["status"]).inc()


# =============================================================================
# Utility Functions
# =============================================================================

def record_bound_check(result: str) -> None:
    """Count one bound report: "pass", "fail" or "expected_violation"."""
    powerbound_bound_checks_total.labels(result=result).inc()


def record_error(error_type: str, component: str) -> None:
    """Record an error occurrence."""
    powerbound_errors_total.labels(
        error_type=error_type,
        component=component
    ).inc()


# =============================================================================
# Setup and Export Functions
# =============================================================================

def setup_metrics(app_info: Optional[Dict[str, str]] = None) -> None:
    """Setup metrics with application information."""
    powerbound_app_info.info(app_info or {'version': '0.1.0', 'name': 'powerbound'})


def get_metrics() -> bytes:
    """Get metrics in Prometheus format."""
    return generate_latest(metrics_registry)


def write_metrics(path: Path) -> Path:
    """Write the registry in the Prometheus text format (node-exporter textfile style)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    write_to_textfile(str(path), metrics_registry)
    return path


def _total(metric: Any, **labels: str) -> float:
    total = 0.0
    for family in metric.collect():
        for sample in family.samples:
            if sample.name.endswith("_total") and all(sample.labels.get(k) == v for k, v in labels.items()):
                total += sample.value
    return total


def get_metrics_summary() -> Dict[str, Any]:
    """Get a summary of current metrics."""
    return {
        "total_scenarios": _total(powerbound_scenarios_total),
        "failed_scenarios": _total(powerbound_scenarios_total, status="failed"),
        "bound_checks": _total(powerbound_bound_checks_total),
        "expected_violations": _total(powerbound_bound_checks_total, result="expected_violation"),
        "total_errors": _total(powerbound_errors_total),
    }
