import numpy as np
import pytest

from entroseg.core import piecewise_test_signal

# filled by test_acceptance.py, printed once at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def fixture_signal():
    """The 41-point three-branch test signal on [-4, 4]."""
    return piecewise_test_signal()

