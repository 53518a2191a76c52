import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_pd(rng, q, ridge=0.5):
    A = rng.standard_normal((q, q))
    return A @ A.T / q + ridge * np.eye(q)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
