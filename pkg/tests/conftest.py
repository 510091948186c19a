import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")



def table_to_grid(rows):
    """Display layout (rows p = 11..00, columns q = 00..11) -> [q1, q2, p1, p2]."""
    rows = np.asarray(rows, dtype=float)
    n = rows.shape[0]
    out = np.empty((n, n))
    for r in range(n):
        for c in range(n):
            out[c, n - 1 - r] = rows[r, c]
    if n == 2:
        return out
    return out.reshape(2, 2, 2, 2)


def random_hermitian(rng, n, size=None):
    shape = (n, n) if size is None else (size, n, n)
    g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return 0.5 * (g + np.swapaxes(g.conj(), -1, -2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
