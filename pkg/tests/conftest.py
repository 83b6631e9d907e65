import sys

import mpmath
import numpy as np
import pytest

mpmath.mp.dps = 50


def mp_h(p):
    """Binary entropy at 50 digits, independent of the package."""
    p = mpmath.mpf(p)
    if p in (0, 1):
        return mpmath.mpf(0)
    return -(p * mpmath.log(p, 2) + (1 - p) * mpmath.log(1 - p, 2))


def mp_entropy(weights):
    return sum(-mpmath.mpf(w) * mpmath.log(mpmath.mpf(w), 2) for w in weights if w > 0)


def mp_cascade(e, d):
    e, d = mpmath.mpf(e), mpmath.mpf(d)
    return e + d - 2 * e * d


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
