import csv
import json
import math

import pytest

from src.cli import (
    REPORT_FILE,
    SWEEP_FILE,
    ConfigError,
    RunReport,
    expand_sweep,
    load_report,
    parse_config,
    resolve_output_dir,
    run,
    sweep,
)
from src.cli.output import write_report
from src.config.settings import settings
from src.main import EXIT_CONFIG_ERROR, EXIT_FAILED, EXIT_PASSED, main
from src.utils.metrics import get_metrics, get_metrics_summary

pytestmark = pytest.mark.unit

QUICK_CONFIG = """\
hbar: 1.0
scenarios:
  - kind: twin_oscillator
    taus: [0.5, 1.5707963267948966]
  - kind: nonautonomous_control
    couplings: [1.0, 2.0]
  - kind: commuting_triviality
    seed: 7
    sites: 21
"""

CLOCK_CONFIG = """\
emit_distributions: true
scenarios:
  - kind: qubit_saturation
    bump_ratio: 0.5
    steps: 256
    clock_points: 401
"""


# ----------------------
# Fixtures & Test Data
# ----------------------
@pytest.fixture
def quick_config():
    return parse_config(QUICK_CONFIG)


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(QUICK_CONFIG, encoding="utf-8")
    return path


def read_csv(path):
    with path.open(newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


# ----------------------
# 1. Config Parsing
# ----------------------
def test_parse_config_applies_defaults():
    config = parse_config("scenarios:\n  - kind: commuting_triviality\n    seed: 3\n")
    assert config.emit_distributions is False
    assert config.output_dir is None
    spec = config.scenarios[0]
    assert spec.kind == "commuting_triviality"
    assert spec.sites == 31
    assert spec.hbar is None


def test_run_level_hbar_is_inherited_unless_overridden():
    config = parse_config(
        "hbar: 2.0\n"
        "scenarios:\n"
        "  - kind: twin_oscillator\n"
        "  - kind: twin_oscillator\n"
        "    hbar: 0.5\n"
    )
    assert config.scenarios[0].hbar == 2.0
    assert config.scenarios[1].hbar == 0.5


def test_run_level_tolerances_merge_under_scenario_values():
    config = parse_config(
        "tolerances: {closed_form_work: 1.0e-8, number_conservation: 1.0e-9}\n"
        "scenarios:\n"
        "  - kind: twin_oscillator\n"
        "    tolerances: {closed_form_work: 1.0e-6}\n"
    )
    assert config.scenarios[0].tolerances == {"closed_form_work": 1e-6, "number_conservation": 1e-9}


def test_negative_width_is_reported_with_its_line():
    text = "scenarios:\n  - kind: qubit_saturation\n    L: -1.0\n"
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    issue = info.value.issues[0]
    assert issue.line == 3
    assert issue.location.endswith("L")
    assert "line 3" in str(info.value)


def test_every_issue_is_reported():
    text = (
        "scenarios:\n"
        "  - kind: twin_oscillator\n"
        "    omgea: 1.0\n"
        "  - kind: qubit_saturation\n"
        "    L: 0.0\n"
    )
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    lines = sorted(issue.line for issue in info.value.issues)
    assert lines == [3, 5]


def test_unknown_kind_is_rejected():
    with pytest.raises(ConfigError) as info:
        parse_config("scenarios:\n  - kind: perpetual_motion\n")
    assert info.value.issues[0].line == 2


def test_empty_scenario_list_is_rejected():
    with pytest.raises(ConfigError):
        parse_config("scenarios: []\n")


def test_unknown_top_level_key_is_rejected():
    with pytest.raises(ConfigError) as info:
        parse_config("scenarios:\n  - kind: twin_oscillator\nworkerz: 2\n")
    assert info.value.issues[0].line == 3


def test_invalid_yaml_reports_line():
    with pytest.raises(ConfigError) as info:
        parse_config("scenarios:\n  - kind: twin_oscillator\n    taus: [0.5, 1.0\n")
    assert "invalid YAML" in info.value.issues[0].message
    assert info.value.issues[0].line is not None


def test_non_mapping_config_is_rejected():
    with pytest.raises(ConfigError):
        parse_config("- kind: twin_oscillator\n")


# ----------------------
# 2. Output Directory
# ----------------------
def test_output_dir_priority(quick_config, tmp_path, monkeypatch):
    monkeypatch.delenv("POWERBOUND_OUTPUT_DIR", raising=False)
    assert resolve_output_dir(quick_config) == settings.runner.output_dir

    from_config = quick_config.model_copy(update={"output_dir": tmp_path / "config"})
    assert resolve_output_dir(from_config) == tmp_path / "config"

    monkeypatch.setenv("POWERBOUND_OUTPUT_DIR", str(tmp_path / "env"))
    assert resolve_output_dir(from_config) == tmp_path / "env"
    assert resolve_output_dir(from_config, tmp_path / "flag") == tmp_path / "flag"


def test_run_honours_environment_output_dir(quick_config, tmp_path, monkeypatch):
    monkeypatch.setenv("POWERBOUND_OUTPUT_DIR", str(tmp_path / "env"))
    run(quick_config)
    assert (tmp_path / "env" / REPORT_FILE).exists()


# ----------------------
# 3. Run Command
# ----------------------
def test_run_writes_report(quick_config, tmp_path):
    report = run(quick_config, tmp_path)
    assert report.passed
    assert report.exit_code == 0
    assert [o.kind for o in report.outcomes] == ["twin_oscillator", "nonautonomous_control", "commuting_triviality"]
    assert set(report.timings) == {"00-twin_oscillator", "01-nonautonomous_control", "02-commuting_triviality", "total"}
    assert report.schema_tag == settings.runner.schema_tag

    loaded = load_report(tmp_path / REPORT_FILE)
    assert loaded.digest == report.digest
    assert loaded.compute_digest() == report.digest
    assert loaded.comparable() == report.comparable()


def test_negative_control_does_not_fail_the_run(quick_config, tmp_path):
    report = run(quick_config, tmp_path)
    control = report.outcomes[1]
    assert not control.autonomous
    assert control.bound_report.expected_violation
    assert report.passed


def test_raising_scenario_fails_the_run(tmp_path):
    config = parse_config(
        "scenarios:\n  - kind: twin_oscillator\n    n_trunc: 1\n  - kind: commuting_triviality\n    seed: 7\n    sites: 21\n"
    )
    report = run(config, tmp_path)
    broken = report.outcomes[0]
    assert broken.error.startswith("TruncationError")
    assert not broken.passed
    assert report.outcomes[1].passed
    assert not report.passed
    assert report.exit_code == 1


def test_digest_is_independent_of_output_dir(quick_config, tmp_path):
    first = run(quick_config, tmp_path / "a")
    second = run(quick_config, tmp_path / "b")
    assert first.digest == second.digest
    assert first.timings != {} and second.timings != {}


def test_digest_ignores_timings(quick_config, tmp_path):
    report = run(quick_config, tmp_path)
    retimed = report.model_copy(update={"timings": {"total": 1e6}})
    assert retimed.compute_digest() == report.digest


def test_emit_distributions_writes_csv(tmp_path):
    report = run(parse_config(CLOCK_CONFIG), tmp_path)
    outcome = report.outcomes[0]
    assert outcome.artifacts == ["00-qubit_saturation-before.csv", "00-qubit_saturation-after.csv"]
    for name in outcome.artifacts:
        rows = read_csv(tmp_path / name)
        assert rows[0] == ["energy", "probability"]
        assert sum(float(p) for _, p in rows[1:]) == pytest.approx(1.0, abs=1e-9)


def test_metrics_file_is_written(quick_config, tmp_path):
    before = get_metrics_summary()
    run(quick_config, tmp_path)
    after = get_metrics_summary()
    assert after["total_scenarios"] - before["total_scenarios"] == 3
    assert after["expected_violations"] - before["expected_violations"] >= 2
    text = (tmp_path / settings.metrics.textfile).read_text(encoding="utf-8")
    assert "powerbound_scenarios_total" in text
    assert "powerbound_bound_checks_total" in get_metrics().decode("utf-8")


def test_report_floats_keep_seventeen_digits(quick_config, tmp_path):
    report = run(quick_config, tmp_path / "run")
    first = report.outcomes[0]
    figures = {**first.figures, "third": 1 / 3, "unit": 1.0, "tenth": 0.1}
    edited = report.model_copy(update={"outcomes": [first.model_copy(update={"figures": figures}), *report.outcomes[1:]]})

    path = write_report(edited, tmp_path / "edited" / REPORT_FILE)
    text = path.read_text(encoding="utf-8")
    assert '"third": 0.33333333333333331' in text
    assert '"unit": 1.0' in text
    assert '"tenth": 0.10000000000000001' in text

    loaded = load_report(path)
    assert loaded.outcomes[0].figures["third"] == 1 / 3
    assert loaded.comparable() == edited.comparable()
    assert json.loads(text)["digest"] == edited.digest


# ----------------------
# 4. Sweeps
# ----------------------
def test_sweep_over_coupling(quick_config, tmp_path):
    report = sweep(quick_config, "nonautonomous_control.couplings", [1.0, 2.0, 4.0], tmp_path)
    assert report.artifacts == [SWEEP_FILE]
    rows = read_csv(tmp_path / SWEEP_FILE)
    assert rows[0] == ["param", "W", "P", "rhs_pb_f", "rhs_pb_1", "saturation"]
    assert len(rows) == 4
    for row in rows[1:]:
        g = float(row[0])
        assert float(row[2]) == pytest.approx(2 * g / math.pi, rel=1e-10)
        assert float(row[3]) == pytest.approx(0.0, abs=1e-12)


def test_sweep_over_bump_ratio(tmp_path):
    config = parse_config(CLOCK_CONFIG.replace("emit_distributions: true", "emit_distributions: false"))
    sweep(config, "qubit_saturation.bump_ratio", [0.5, 0.2, 0.1], tmp_path)
    saturations = [float(row[5]) for row in read_csv(tmp_path / SWEEP_FILE)[1:]]
    assert saturations == sorted(saturations)
    assert saturations[-1] < 1 / math.pi


def test_single_value_sweep_matches_plain_run(quick_config, tmp_path):
    swept = sweep(quick_config, "1.couplings", [2.0], tmp_path / "sweep")
    plain_config = parse_config("hbar: 1.0\nscenarios:\n  - kind: nonautonomous_control\n    couplings: [2.0]\n")
    plain = run(plain_config, tmp_path / "plain")
    assert swept.comparable()["outcomes"] == plain.comparable()["outcomes"]


def test_sweep_addresses_single_scenario_by_bare_name():
    config = parse_config("scenarios:\n  - kind: commuting_triviality\n    seed: 7\n")
    expanded = expand_sweep(config, "seed", [1, 2, 3])
    assert [spec.seed for spec in expanded.scenarios] == [1, 2, 3]


@pytest.mark.parametrize(
    "path",
    ["qubit_saturation.g", "9.g", "twin_oscillator.nope", "twin_oscillator.kind", "twin_oscillator.tolerances", "g"],
)
def test_sweep_rejects_bad_paths(quick_config, path):
    with pytest.raises(ConfigError):
        expand_sweep(quick_config, path, [1.0])


def test_sweep_rejects_invalid_values(quick_config):
    with pytest.raises(ConfigError) as info:
        expand_sweep(quick_config, "twin_oscillator.g", [1.0, -1.0])
    assert "-1.0" in info.value.issues[0].location


# ----------------------
# 5. Command Line
# ----------------------
def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == EXIT_PASSED
    catalogue = json.loads(capsys.readouterr().out)
    assert {entry["kind"] for entry in catalogue} == {
        "twin_oscillator",
        "nonautonomous_control",
        "qubit_saturation",
        "random_clock_ensemble",
        "commuting_triviality",
        "embedded_oscillator",
    }


def test_validate_accepts_good_config(config_file):
    assert main(["validate", str(config_file)]) == EXIT_PASSED


def test_validate_rejects_bad_config(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("scenarios:\n  - kind: qubit_saturation\n    L: -1.0\n", encoding="utf-8")
    assert main(["validate", str(path)]) == EXIT_CONFIG_ERROR


def test_missing_config_is_a_config_error(tmp_path):
    assert main(["run", str(tmp_path / "missing.yaml")]) == EXIT_CONFIG_ERROR


def test_run_command(config_file, tmp_path):
    assert main(["run", str(config_file), "--output-dir", str(tmp_path / "out")]) == EXIT_PASSED
    report = RunReport.model_validate_json((tmp_path / "out" / REPORT_FILE).read_text(encoding="utf-8"))
    assert report.passed


def test_run_command_exit_code_on_failure(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("scenarios:\n  - kind: twin_oscillator\n    n_trunc: 1\n", encoding="utf-8")
    assert main(["run", str(path), "--output-dir", str(tmp_path / "out")]) == EXIT_FAILED


def test_sweep_command(config_file, tmp_path):
    code = main(
        ["sweep", str(config_file), "--param", "twin_oscillator.g", "--values", "0.5, 1", "--output-dir", str(tmp_path)]
    )
    assert code == EXIT_PASSED
    assert len(read_csv(tmp_path / SWEEP_FILE)) == 3
