import numpy as np
import pytest

from hcmalab.grid import TorusGrid

# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE_LINES = {}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(params=[1, 2], ids=["n1", "n2"])
def small_grid(request):
    n = request.param
    return TorusGrid(n, 16, 9) if n == 2 else TorusGrid(1, 32, 17)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
