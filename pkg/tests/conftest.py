import itertools

import mpmath
import numpy as np
import pytest

from minbucket.graph import SimpleGraph

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


def holder_holds(d) -> bool:
    """m^-2 (sum d^(4/3))^3 <= 4 sum d^2, evaluated at 60 digits."""
    vals, counts = np.unique(np.asarray(d), return_counts=True)
    v = vals.astype(float)
    lhs = float(np.dot(counts, v ** (4 / 3))) ** 3 / (float(np.dot(counts, v)) / 2) ** 2
    rhs = 4 * float(np.dot(counts, v * v))
    if lhs < rhs * (1 - 1e-9):
        return True  # float error is far below this margin
    with mpmath.workdps(60):
        s43 = mpmath.fsum(int(c) * mpmath.mpf(int(k)) ** (mpmath.mpf(4) / 3)
                          for k, c in zip(vals, counts))
        m = mpmath.mpf(sum(int(c) * int(k) for k, c in zip(vals, counts))) / 2
        lhs = s43 ** 3 / m ** 2
        rhs = 4 * sum(int(c) * int(k) ** 2 for k, c in zip(vals, counts))
        # equality (regular sequences) must not be flagged by the last digit
        return lhs <= rhs * (1 + mpmath.mpf(10) ** -50)


def complete(n):
    return SimpleGraph.from_edges(n, *zip(*itertools.combinations(range(n), 2)))


def star(leaves):
    return SimpleGraph.from_edges(leaves + 1, [0] * leaves, list(range(1, leaves + 1)))


def path(n):
    return SimpleGraph.from_edges(n, list(range(n - 1)), list(range(1, n)))


def petersen():
    u, v = [], []
    for i in range(5):
        u += [i, i, 5 + i]
        v += [(i + 1) % 5, 5 + i, 5 + (i + 2) % 5]
    return SimpleGraph.from_edges(10, u, v)


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    pairs = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p]
    if not pairs:
        return SimpleGraph.from_edges(n, [], [])
    return SimpleGraph.from_edges(n, *zip(*pairs))


@pytest.fixture
def k3():
    return complete(3)


@pytest.fixture
def k4():
    return complete(4)
