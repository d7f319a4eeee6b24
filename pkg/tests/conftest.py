import pytest

from ultraball.harness import TrialConfig, run_suite


@pytest.fixture(scope="session")
def default_report():
    """The acceptance-scale verification run, shared across criteria."""
    return run_suite(TrialConfig())
