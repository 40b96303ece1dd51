import numpy as np
import pytest

from diffuse.generators import random_connected


@pytest.fixture(scope="session")
def random_graphs():
    """40 small connected graphs over three densities, fixed RNG."""
    rng = np.random.default_rng(20140824)
    out = []
    for i in range(40):
        n = int(rng.integers(5, 51))
        p = (0.1, 0.3, 0.6)[i % 3]
        out.append(random_connected(n, p, rng))
    return out


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not getattr(mod, "REPORT", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.REPORT:
        terminalreporter.write_line(line)
