#!/usr/bin/env python3
"""
powerbound - Main Application

Command-line entry point: runs scenario configs, parameter sweeps, lists
the scenario catalogue and validates configs without executing them.

Exit codes: 0 when every autonomous scenario passed, 1 when one failed or
raised, 2 on a config error.
"""

import argparse
import json
import logging
import sys
import traceback
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .cli.commands import run, sweep
from .cli.config_parser import ConfigError, load_config
from .config.settings import settings
from .scenarios.registry import describe_scenarios
from .utils.metrics import record_error, setup_metrics

EXIT_PASSED = 0
EXIT_FAILED = 1
EXIT_CONFIG_ERROR = 2

DEFAULT_CONFIG = Path(__file__).resolve().parent.parent / "configs" / "default.yaml"


def configure_logging(level: str) -> None:
    try:
        import colorlog
        handler = colorlog.StreamHandler()
        handler.setFormatter(colorlog.ColoredFormatter('%(log_color)s%(levelname)s:%(name)s:%(message)s'))
        logging.root.handlers = [handler]
        logging.root.setLevel(level)
    except ImportError:
        logging.basicConfig(
            format='%(asctime)s %(levelname)s %(name)s %(message)s',
            level=level
        )


# =============================================================================
# Enhanced Logging Functions
# =============================================================================

def log_config_error(error: ConfigError, path: Path) -> None:
    """Log every config issue with its line number."""

    logging.error("=" * 80)
    logging.error("🚨 CONFIG ERROR")
    logging.error("=" * 80)
    logging.error(f"📋 Config: {path}")
    logging.error(f"📋 Issues: {len(error.issues)}")
    for issue in error.issues:
        logging.error(f"   ❌ {issue}")
    logging.error("")
    logging.error("🔧 TROUBLESHOOTING STEPS:")
    logging.error("   🔍 Compare the scenario block with `powerbound list-scenarios`")
    logging.error("   🔍 Unknown keys are rejected; check for typos")
    logging.error("   🔍 Dimensions, times and tolerances must be positive")
    logging.error("=" * 80)


def log_unexpected_error(error: Exception, command: str) -> None:
    error_type = type(error).__name__
    logging.error("=" * 80)
    logging.error(f"🚨 UNEXPECTED ERROR - {command.upper()}")
    logging.error("=" * 80)
    logging.error(f"📋 Error Type: {error_type}")
    logging.error(f"📋 Error Message: {error}")
    logging.error("")
    logging.error("📊 TECHNICAL DETAILS:")
    logging.error(f"   Stack Trace: {traceback.format_exc()}")
    logging.error("=" * 80)


# =============================================================================
# Argument Parsing
# =============================================================================

def parse_values(text: str) -> List[float]:
    try:
        return [float(part) for part in text.replace(",", " ").split()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"values must be numbers separated by commas: {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="powerbound",
        description="Check autonomous quantum machines against the agent-fluctuation power bounds",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=settings.logging.level, help="Logging level (default: %(default)s)")
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Run every scenario of a config")
    run_parser.add_argument("config", type=Path, nargs="?", default=DEFAULT_CONFIG, help="YAML run config")
    run_parser.add_argument("--output-dir", type=Path, default=None, help="Overrides POWERBOUND_OUTPUT_DIR and the config")

    sweep_parser = commands.add_parser("sweep", help="Run one scenario once per parameter value")
    sweep_parser.add_argument("config", type=Path, help="YAML run config")
    sweep_parser.add_argument("--param", required=True, help="Parameter path: <kind-or-index>.<param>")
    sweep_parser.add_argument("--values", required=True, type=parse_values, help="Comma-separated values")
    sweep_parser.add_argument("--output-dir", type=Path, default=None, help="Overrides POWERBOUND_OUTPUT_DIR and the config")

    commands.add_parser("list-scenarios", help="Print scenario kinds with their default parameters")

    validate_parser = commands.add_parser("validate", help="Validate a config without running it")
    validate_parser.add_argument("config", type=Path, help="YAML run config")
    return parser


# =============================================================================
# Application Entry Point
# =============================================================================

def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level.upper())

    if args.command == "list-scenarios":
        print(json.dumps(describe_scenarios(), indent=2, default=str))
        return EXIT_PASSED

    try:
        config = load_config(args.config)
        if args.command == "validate":
            logging.info(f"✅ {args.config} is valid ({len(config.scenarios)} scenarios)")
            return EXIT_PASSED

        setup_metrics({"version": __version__, "name": "powerbound", "command": args.command})
        if args.command == "sweep":
            report = sweep(config, args.param, args.values, args.output_dir)
        else:
            report = run(config, args.output_dir)
    except ConfigError as e:
        record_error("ConfigError", "config")
        log_config_error(e, args.config)
        return EXIT_CONFIG_ERROR
    except Exception as e:
        record_error(type(e).__name__, "cli")
        log_unexpected_error(e, args.command)
        return EXIT_FAILED

    return EXIT_PASSED if report.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
