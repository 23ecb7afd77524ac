"""
Run and sweep commands.

Scenarios execute concurrently on a thread pool; the report is assembled
afterwards in scenario order, so its content does not depend on which
worker finished first.
"""

import logging
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from ..config.settings import settings
from ..scenarios.registry import ScenarioRun, run_scenario
from ..scenarios.specs import SPEC_TYPES, ScenarioBase
from ..shared_models import ScenarioOutcome
from ..utils.metrics import get_metrics_summary, record_bound_check, track_scenario, write_metrics
from .config_parser import ConfigError, ConfigIssue
from .models import RunConfig, RunReport, overall_pass
from .output import (
    REPORT_FILE,
    SWEEP_FILE,
    resolve_output_dir,
    slug,
    sweep_row,
    write_distribution,
    write_report,
    write_sweep,
)


# =============================================================================
# Logging Helpers
# =============================================================================

def log_scenario_start(index: int, spec: ScenarioBase) -> None:
    logging.info("=" * 60)
    logging.info("🔄 RUNNING SCENARIO")
    logging.info("=" * 60)
    logging.info(f"📋 Index: {index}")
    logging.info(f"📋 Kind: {spec.kind}")  # type: ignore[attr-defined]
    logging.info(f"📋 Name: {spec.label}")
    logging.info(f"📋 hbar: {spec.action}")
    logging.info("=" * 60)


def log_scenario_result(index: int, outcome: ScenarioOutcome) -> None:
    headline = "✅ SCENARIO PASSED" if outcome.passed else "⚠️ SCENARIO FAILED"
    logging.info("=" * 60)
    logging.info(headline)
    logging.info("=" * 60)
    logging.info(f"📋 Index: {index}")
    logging.info(f"📋 Name: {outcome.name}")
    logging.info(f"📋 Autonomous: {outcome.autonomous}")
    failed = [check.name for check in outcome.checks if check.applicable and not check.passed]
    if failed:
        logging.info(f"📋 Failed Checks: {', '.join(failed)}")
    if outcome.bound_report is not None:
        report = outcome.bound_report
        logging.info(f"📋 Power: {report.power:.6g} (bounds {report.rhs_commutator:.6g} <= {report.rhs_fluctuation:.6g})")
        if report.expected_violation:
            logging.info("📋 Expected Violation: switch-on condition fails, no bound applies")
    logging.info(f"📋 Duration: {outcome.duration_seconds:.3f} seconds")
    logging.info("=" * 60)


def log_scenario_error(error: Exception, index: int, spec: ScenarioBase) -> None:
    """Log a scenario that raised, with troubleshooting steps."""

    error_type = type(error).__name__
    logging.error("=" * 80)
    logging.error(f"🚨 SCENARIO ERROR - {spec.label.upper()}")
    logging.error("=" * 80)
    logging.error(f"📋 Index: {index}")
    logging.error(f"📋 Kind: {spec.kind}")  # type: ignore[attr-defined]
    logging.error(f"📋 Error Type: {error_type}")
    logging.error(f"📋 Error Message: {error}")
    logging.error("")
    logging.error("🔧 TROUBLESHOOTING STEPS:")
    if error_type == "LatticeWrapError":
        logging.error("   🔍 Enlarge the lattice or reduce the interaction window")
    elif error_type == "TruncationError":
        logging.error("   🔍 Raise n_trunc above the highest populated Fock level")
    elif error_type == "BranchCutError":
        logging.error("   🔍 Move target eigenphases away from -pi")
    else:
        logging.error("   🔍 Check the scenario parameters against list-scenarios")
        logging.error("   🔍 Rerun the single scenario with LOGGING_LEVEL=DEBUG")
    logging.error("")
    logging.error("📊 TECHNICAL DETAILS:")
    logging.error(f"   Exception Type: {error_type}")
    logging.error(f"   Stack Trace: {traceback.format_exc()}")
    logging.error("=" * 80)


# =============================================================================
# Execution
# =============================================================================

def _error_outcome(spec: ScenarioBase, error: Exception) -> ScenarioOutcome:
    return ScenarioOutcome(
        name=spec.label,
        kind=spec.kind,  # type: ignore[attr-defined]
        passed=False,
        parameters=spec.model_dump(mode="json"),
        error=f"{type(error).__name__}: {error}",
    )


def _execute(index: int, spec: ScenarioBase, emit_distributions: bool) -> ScenarioRun:
    log_scenario_start(index, spec)
    start_time = time.perf_counter()
    try:
        with track_scenario(spec.kind) as state:  # type: ignore[attr-defined]
            result = run_scenario(spec, emit_distributions=emit_distributions)
            state["status"] = "passed" if result.outcome.passed else "failed"
    except Exception as e:
        log_scenario_error(e, index, spec)
        result = ScenarioRun(_error_outcome(spec, e))

    duration = time.perf_counter() - start_time
    result.outcome = result.outcome.model_copy(update={"duration_seconds": duration})
    reports = result.outcome.machine_reports
    if not reports and result.outcome.bound_report is not None:
        reports = [result.outcome.bound_report]
    for report in reports:
        if report.expected_violation:
            record_bound_check("expected_violation")
        else:
            record_bound_check("pass" if report.passed else "fail")
    log_scenario_result(index, result.outcome)
    return result


def _key(index: int, outcome: ScenarioOutcome) -> str:
    return f"{index:02d}-{slug(outcome.name)}"


def _execute_config(config: RunConfig, output_dir: Path) -> Tuple[List[ScenarioOutcome], Dict[str, float]]:
    workers = config.workers or settings.runner.workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_execute, index, spec, config.emit_distributions)
            for index, spec in enumerate(config.scenarios)
        ]
        runs = [future.result() for future in futures]

    outcomes: List[ScenarioOutcome] = []
    timings: Dict[str, float] = {}
    for index, result in enumerate(runs):
        key = _key(index, result.outcome)
        artifacts = []
        for which, distribution in result.distributions.items():
            name = f"{key}-{which}.csv"
            write_distribution(distribution, output_dir / name)
            artifacts.append(name)
        outcome = result.outcome
        if artifacts:
            outcome = outcome.model_copy(update={"artifacts": artifacts})
        outcomes.append(outcome)
        timings[key] = outcome.duration_seconds
    return outcomes, timings


def _finish(
    outcomes: List[ScenarioOutcome],
    timings: Dict[str, float],
    output_dir: Path,
    started: float,
    artifacts: Sequence[str] = (),
) -> RunReport:
    timings["total"] = time.perf_counter() - started
    report = RunReport(
        passed=overall_pass(outcomes),
        outcomes=outcomes,
        artifacts=list(artifacts),
        timings=timings,
    )
    report = report.model_copy(update={"digest": report.compute_digest()})
    path = write_report(report, output_dir / REPORT_FILE)
    if settings.metrics.enabled:
        write_metrics(output_dir / settings.metrics.textfile)

    summary = get_metrics_summary()
    logging.info("=" * 60)
    logging.info("📤 REPORT WRITTEN" if report.passed else "⚠️ REPORT WRITTEN WITH FAILURES")
    logging.info("=" * 60)
    logging.info(f"📋 Path: {path}")
    logging.info(f"📋 Scenarios: {len(outcomes)}")
    logging.info(f"📋 Passed: {report.passed}")
    logging.info(f"📋 Digest: {report.digest}")
    expected = summary["expected_violations"]
    logging.info(f"📋 Bound Checks: {summary['bound_checks']:.0f} ({expected:.0f} expected violations)")
    logging.info(f"📋 Duration: {timings['total']:.3f} seconds")
    logging.info("=" * 60)
    return report


def run(config: RunConfig, output_dir: Optional[Path] = None) -> RunReport:
    """Execute every scenario, write report.json and any CSV artifacts."""
    started = time.perf_counter()
    target = resolve_output_dir(config, output_dir)
    outcomes, timings = _execute_config(config, target)
    return _finish(outcomes, timings, target, started)


# =============================================================================
# Sweeps
# =============================================================================

def _resolve_target(config: RunConfig, path: str) -> Tuple[ScenarioBase, str]:
    head, _, param = path.rpartition(".")
    if not head:
        if len(config.scenarios) != 1:
            raise ConfigError([ConfigIssue(path, "sweep path must name a scenario: <kind-or-index>.<param>")])
        spec: ScenarioBase = config.scenarios[0]
    elif head.isdigit():
        index = int(head)
        if index >= len(config.scenarios):
            raise ConfigError([ConfigIssue(path, f"no scenario at index {index}")])
        spec = config.scenarios[index]
    else:
        matches = [s for s in config.scenarios if head in (s.kind, s.name)]  # type: ignore[attr-defined]
        if not matches:
            raise ConfigError([ConfigIssue(path, f"no scenario of kind or name '{head}'")])
        spec = matches[0]

    if param not in type(spec).model_fields or param == "kind":
        raise ConfigError([ConfigIssue(path, f"'{param}' is not a parameter of {spec.kind}")])  # type: ignore[attr-defined]
    if isinstance(getattr(spec, param), (tuple, dict)):
        raise ConfigError([ConfigIssue(path, f"'{param}' cannot be swept with scalar values")])
    return spec, param


def expand_sweep(config: RunConfig, path: str, values: Sequence[float]) -> RunConfig:
    """One copy of the addressed scenario per value; list parameters receive [value]."""
    if not values:
        raise ConfigError([ConfigIssue(path, "sweep needs at least one value")])
    spec, param = _resolve_target(config, path)
    spec_type = SPEC_TYPES[spec.kind]  # type: ignore[attr-defined]
    scalar_list = isinstance(getattr(spec, param), list)

    scenarios = []
    issues: List[ConfigIssue] = []
    for value in values:
        data = spec.model_dump()
        data[param] = [value] if scalar_list else value
        try:
            scenarios.append(spec_type.model_validate(data))
        except ValueError as e:
            issues.append(ConfigIssue(f"{path}={value!r}", str(e).splitlines()[-1].strip()))
    if issues:
        raise ConfigError(issues)
    return config.model_copy(update={"scenarios": scenarios})


def sweep(config: RunConfig, path: str, values: Sequence[float], output_dir: Optional[Path] = None) -> RunReport:
    """Run the addressed scenario once per value and write sweep.csv next to the report."""
    started = time.perf_counter()
    swept = expand_sweep(config, path, values)
    target = resolve_output_dir(config, output_dir)
    outcomes, timings = _execute_config(swept, target)

    rows = [sweep_row(float(value), outcome.bound_report) for value, outcome in zip(values, outcomes)]
    write_sweep(rows, target / SWEEP_FILE)
    logging.info(f"📋 Sweep over {path}: {len(rows)} values written to {target / SWEEP_FILE}")
    return _finish(outcomes, timings, target, started, artifacts=[SWEEP_FILE])
