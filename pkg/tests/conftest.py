import sys

import numpy as np
import pytest

from ellip.field import PolarGrid


@pytest.fixture(scope="session")
def grid():
    return PolarGrid.for_modes(48, 24)


@pytest.fixture(scope="session")
def big_grid():
    return PolarGrid.for_modes(64, 48)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "SUMMARY_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
