import numpy as np
import pytest

from perpetuity import RngStream
from perpetuity.sampler import sample_with_steps


@pytest.fixture(scope="session")
def million():
    """10**6 perfect samples (seed 7) with their backoff counts."""
    return sample_with_steps(RngStream(7), 10**6)


@pytest.fixture
def rng():
    return np.random.default_rng(20120725)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
