import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gfvfa.graph import sensor_graph  # noqa: E402
from gfvfa.spectral import graph_basis  # noqa: E402

# filled by test_acceptance.report(); printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES, key=lambda s: (int("".join(c for c in s if c.isdigit())), s)):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(scope="session")
def basis8():
    return graph_basis(sensor_graph(8, k=3, seed=1))


@pytest.fixture(scope="session")
def basis16():
    return graph_basis(sensor_graph(16, k=4, seed=2))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def complex_signal(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)
