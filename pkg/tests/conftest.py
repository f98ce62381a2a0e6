import math

import numpy as np
import pytest

from vellingcheck.geometry import make_partition

# one-line verdicts collected by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def unequal4():
    return make_partition([1.2, 0.7, 0.7, math.pi - 2.6])


@pytest.fixture(scope="session")
def equal4():
    return make_partition([math.pi / 4] * 4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
