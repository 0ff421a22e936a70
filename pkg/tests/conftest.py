import numpy as np
import pytest

from woodshole.foliation import PlaneVectorField
from woodshole.polyalg import MultiPoly

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def xy():
    return MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)


@pytest.fixture
def xyz():
    return tuple(MultiPoly.variable(i, 3) for i in range(3))


@pytest.fixture
def worked_field(xy):
    """v = (x^2 - 1) d/dx + (y^2 - 1) d/dy."""
    x, y = xy
    return PlaneVectorField(x * x - 1, y * y - 1)


@pytest.fixture
def linear_field(xy):
    x, y = xy
    return PlaneVectorField(x, 2 * y)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
