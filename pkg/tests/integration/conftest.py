"""
Integration Tests Configuration

Shared fixtures for end-to-end runs of the bundled config.
"""

import os
from pathlib import Path

import pytest

from src.cli import load_config
from src.main import DEFAULT_CONFIG


# ----------------------
# Environment Configuration
# ----------------------
@pytest.fixture(scope="session", autouse=True)
def setup_test_environment():
    """Keep a developer's POWERBOUND_OUTPUT_DIR from redirecting test output."""
    original = os.environ.pop("POWERBOUND_OUTPUT_DIR", None)

    yield

    if original is not None:
        os.environ["POWERBOUND_OUTPUT_DIR"] = original


# ----------------------
# Fixtures & Test Data
# ----------------------
@pytest.fixture(scope="session")
def bundled_config_path() -> Path:
    assert DEFAULT_CONFIG.exists(), f"Bundled config missing at {DEFAULT_CONFIG}"
    return DEFAULT_CONFIG


@pytest.fixture(scope="session")
def bundled_config(bundled_config_path):
    return load_config(bundled_config_path)


@pytest.fixture
def output_dir(tmp_path) -> Path:
    return tmp_path / "powerbound-output"


# ----------------------
# Test Categories
# ----------------------
def pytest_collection_modifyitems(config, items):
    """Every test here runs the full bundled config: mark it integration and slow."""
    for item in items:
        if "integration" in item.path.parts:
            item.add_marker(pytest.mark.integration)
            item.add_marker(pytest.mark.slow)
