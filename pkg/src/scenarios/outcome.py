"""Assembly of scenario outcomes from checks and bound reports."""

from typing import Dict, Iterable, List, Optional

from ..shared_models import BoundReport, CheckReport, ScenarioOutcome
from .specs import ScenarioBase


def threshold_check(name: str, residual: float, tol: float, detail: str = "", applicable: bool = True) -> CheckReport:
    residual = max(0.0, float(residual))
    return CheckReport(
        name=name,
        passed=residual <= tol,
        residual=residual,
        tolerance=tol,
        applicable=applicable,
        detail=detail or f"residual {residual:.3e} (tol {tol:.1e})",
    )


def renamed(check: CheckReport, name: str) -> CheckReport:
    return check.model_copy(update={"name": name})


def build_outcome(
    spec: ScenarioBase,
    checks: Iterable[CheckReport],
    reports: List[BoundReport],
    autonomous: bool,
    figures: Optional[Dict[str, float]] = None,
    primary: Optional[BoundReport] = None,
) -> ScenarioOutcome:
    """A scenario passes when every applicable check and every bound report passes.

    Autonomous scenarios additionally require the switch-on condition on each machine.
    """
    checks = list(checks)
    passed = all(check.passed or not check.applicable for check in checks)
    passed = passed and all(report.passed for report in reports)
    if autonomous:
        passed = passed and all(report.condition1_ok for report in reports)

    return ScenarioOutcome(
        name=spec.label,
        kind=spec.kind,  # type: ignore[attr-defined]
        autonomous=autonomous,
        passed=passed,
        bound_report=primary if primary is not None else (reports[0] if reports else None),
        machine_reports=reports if len(reports) > 1 else [],
        checks=checks,
        figures=figures or {},
        parameters=spec.model_dump(mode="json"),
    )
