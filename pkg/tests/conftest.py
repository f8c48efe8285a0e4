import numpy as np
import pytest

from scatsize import RealDirection

_ACCEPTANCE_LINES = []


@pytest.fixture
def alpha():
    return RealDirection.normalized([0.6, 0.8, 0.0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion."""

    def _report(name, passed, detail):
        _ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
        return passed

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
