"""Test configuration for the upbbell package."""

import pytest
from click.testing import CliRunner

from upbbell.commands import create_cli
from upbbell.services import catalog


def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line("markers", "slow: exact computations that take minutes")


@pytest.fixture(scope="session")
def cli_instance():
    """Create a command group for testing."""
    return create_cli()


@pytest.fixture
def runner():
    """Create a click test runner."""
    return CliRunner()


@pytest.fixture(scope="session")
def shifts():
    """The three-qubit Shifts UPB."""
    return catalog.get("shifts").vectors


@pytest.fixture(scope="session")
def nwe3():
    """The three-qubit nonlocality-without-entanglement basis."""
    return catalog.get("nwe3").vectors


@pytest.fixture(autouse=True)
def isolated_run_log(monkeypatch, tmp_path):
    """Keep the run log out of the working directory."""
    from upbbell.services.run_log import run_logger

    monkeypatch.setattr(run_logger, "enabled", False)
    monkeypatch.setattr(run_logger, "path", tmp_path / "runs.jsonl")
