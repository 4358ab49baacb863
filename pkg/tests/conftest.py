import sys

import numpy as np
import pytest

from copolar import calabi, hyperbola, perturbed_hyperbola, shifted_cone, truncated_cone
from copolar.cone import Cone

SQ2 = np.sqrt(2.0)
SQ3 = np.sqrt(3.0)


@pytest.fixture(scope="session")
def hyper():
    return hyperbola(1.0)


@pytest.fixture(scope="session")
def cal3():
    return calabi(3, 1.0)


@pytest.fixture(scope="session")
def pert():
    return perturbed_hyperbola(0.1)


@pytest.fixture(scope="session")
def trunc():
    return truncated_cone(Cone.orthant(2), 1.0)


@pytest.fixture(scope="session")
def shifted():
    return shifted_cone(Cone.orthant(2), (1.0, 1.0))


def pytest_terminal_summary(terminalreporter):
    module = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
