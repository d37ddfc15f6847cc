import numpy as np
import pytest
from scipy.stats import unitary_group

from boxtimes.tracy_singh import BlockPartition, PartitionedMatrix

ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, passed, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {num:2d}. {title}: {detail}")


@pytest.fixture
def record():
    """Log one acceptance line; it is printed now and again in the terminal summary."""

    def _record(num, title, passed, detail):
        ACCEPTANCE_RESULTS.append((num, title, bool(passed), detail))
        print(f"[{'PASS' if passed else 'FAIL'}] {num:2d}. {title}: {detail}")

    return _record


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rand_c(rng, rows, cols=None):
    """Random complex matrix with entries in the unit disk."""
    cols = rows if cols is None else cols
    r = np.sqrt(rng.uniform(size=(rows, cols)))
    theta = rng.uniform(0, 2 * np.pi, size=(rows, cols))
    return r * np.exp(1j * theta)


def rand_gaussian_int(rng, rows, cols):
    return rng.integers(-3, 4, size=(rows, cols)) + 1j * rng.integers(-3, 4, size=(rows, cols))


def rand_unitary(rng, n):
    return unitary_group.rvs(n, random_state=rng)


def rand_cuts(rng, max_blocks=3, max_size=4):
    return tuple(int(x) for x in rng.integers(1, max_size + 1, size=rng.integers(1, max_blocks + 1)))


def rand_partitioned(rng, row_cuts=None, col_cuts=None):
    row_cuts = rand_cuts(rng) if row_cuts is None else row_cuts
    col_cuts = rand_cuts(rng) if col_cuts is None else col_cuts
    part = BlockPartition(row_cuts, col_cuts)
    return PartitionedMatrix(rand_c(rng, *part.shape), part)


def rand_invertible(rng, n, cond_max=50.0):
    while True:
        m = rand_c(rng, n)
        if np.linalg.cond(m) < cond_max:
            return m
