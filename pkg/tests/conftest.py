import numpy as np
import pytest

from meanlab.measures import new_measure


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture
def commuting_mu():
    """The two-atom diagonal measure used throughout the worked examples."""
    return new_measure([np.diag([4.0, 1.0]), np.diag([9.0, 16.0])], [0.5, 0.5])


def scalar_power_mean(weights, values, t):
    """Scalar fixed point of x = sum w x^(1-t) a^t, found by bisection.

    Deliberately does not use the closed form so it can serve as an
    independent check of it.
    """
    w = np.asarray(weights, float)
    a = np.asarray(values, float)
    lo, hi = a.min(), a.max()
    g = lambda x: np.sum(w * x ** (1 - t) * a**t) - x
    if g(lo) == 0:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        # g > 0 below the fixed point for t > 0; reversed for t < 0
        if (g(mid) > 0) == (t > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# one line per acceptance criterion, printed after the test session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
