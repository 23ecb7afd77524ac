"""
End-to-End Integration Tests

Runs the bundled config through the command line and the run API and checks
the report it leaves behind.
"""

import math

from src.cli import REPORT_FILE, load_report, run
from src.main import EXIT_PASSED, main


class TestBundledRun:
    """The bundled config is the reference run: it must pass and be reproducible."""

    def test_bundled_config_passes(self, bundled_config, output_dir):
        report = run(bundled_config, output_dir)
        failed = {
            outcome.name: [check.name for check in outcome.checks if check.applicable and not check.passed]
            for outcome in report.outcomes
            if not outcome.passed
        }
        assert report.passed, failed
        assert all(outcome.error is None for outcome in report.outcomes)

        by_name = {outcome.name: outcome for outcome in report.outcomes}
        saturation = by_name["qubit_saturation"].bound_report
        assert 2.0 - 1e-6 <= saturation.work <= 2.0 + 1e-9
        assert 1 / math.pi - 0.02 <= saturation.saturation_fluctuation <= 1 / math.pi + 1e-9
        assert by_name["random_clock_ensemble"].figures["models"] == 200.0
        assert not by_name["nonautonomous_control"].autonomous
        assert by_name["embedded_oscillator"].autonomous
        assert by_name["embedded_oscillator"].bound_report.autonomous

    def test_bundled_run_is_reproducible(self, bundled_config, tmp_path):
        first = run(bundled_config, tmp_path / "first")
        second = run(bundled_config, tmp_path / "second")
        assert first.digest == second.digest
        assert load_report(tmp_path / "first" / REPORT_FILE).digest == first.digest


class TestCommandLine:
    def test_run_exits_zero(self, bundled_config_path, output_dir):
        assert main(["run", str(bundled_config_path), "--output-dir", str(output_dir)]) == EXIT_PASSED
        report = load_report(output_dir / REPORT_FILE)
        assert report.passed
        assert report.compute_digest() == report.digest

    def test_run_defaults_to_bundled_config(self, output_dir):
        assert main(["run", "--output-dir", str(output_dir)]) == EXIT_PASSED
        assert (output_dir / REPORT_FILE).exists()
