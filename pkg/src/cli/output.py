import csv
import os
import re
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from ..clockwork.lattice import EnergyDistribution
from ..config.settings import settings
from ..shared_models import BoundReport
from .models import RunConfig, RunReport, dump_json


# =============================================================================
# CSV Contracts
# =============================================================================

DISTRIBUTION_COLUMNS = ("energy", "probability")
SWEEP_COLUMNS = ("param", "W", "P", "rhs_pb_f", "rhs_pb_1", "saturation")

REPORT_FILE = "report.json"
SWEEP_FILE = "sweep.csv"


def _fmt(value: Optional[float]) -> str:
    return format(float("nan") if value is None else float(value), ".17g")


def _write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence[Optional[float]]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(value) for value in row])
    return path


def slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", label).strip("_") or "scenario"


# =============================================================================
# Writers
# =============================================================================

def resolve_output_dir(config: RunConfig, override: Optional[Path] = None) -> Path:
    """Explicit argument, then POWERBOUND_OUTPUT_DIR, then the config, then the default."""
    if override is not None:
        return override
    env = os.environ.get("POWERBOUND_OUTPUT_DIR")
    if env:
        return Path(env)
    if config.output_dir is not None:
        return config.output_dir
    return settings.runner.output_dir


def write_distribution(distribution: EnergyDistribution, path: Path) -> Path:
    return _write_rows(path, DISTRIBUTION_COLUMNS, distribution.rows())


def sweep_row(value: float, report: Optional[BoundReport]) -> Tuple[Optional[float], ...]:
    if report is None:
        return (value, None, None, None, None, None)
    return (
        value,
        report.work,
        report.power,
        report.rhs_fluctuation,
        report.rhs_commutator,
        report.saturation_fluctuation,
    )


def write_sweep(rows: List[Tuple[Optional[float], ...]], path: Path) -> Path:
    return _write_rows(path, SWEEP_COLUMNS, rows)


def write_report(report: RunReport, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(report.model_dump(mode="json"), indent=2) + "\n", encoding="utf-8")
    return path


def load_report(path: Path) -> RunReport:
    return RunReport.model_validate_json(path.read_text(encoding="utf-8"))
