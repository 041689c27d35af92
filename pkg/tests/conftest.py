import numpy as np
import pytest

from ebmin import Network, PathLossModel


@pytest.fixture
def collinear():
    """Three nodes on a line at unit spacing."""
    return Network(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]), 2.0, "dense")


@pytest.fixture
def model3():
    return PathLossModel(alpha=3.0, r0=1.0, gbar=1.0)


@pytest.fixture
def model4():
    return PathLossModel(alpha=4.0, r0=1.0, gbar=1.0)


def two_node(r, side=None):
    side = side if side is not None else max(r, 1.0)
    return Network(np.array([[0.0, 0.0], [r, 0.0]]), side, "dense")


# one summary line per acceptance criterion, collected by test_acceptance
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
