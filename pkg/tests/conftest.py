import sys
import numpy as np
import pytest

from skrational import polybasis


@pytest.fixture(params=polybasis.available_backends())
def backend(request):
    """Run a test once per available Arnoldi kernel."""
    previous = polybasis.set_backend(request.param)
    yield request.param
    polybasis.set_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    results = getattr(sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance"),
                      "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
