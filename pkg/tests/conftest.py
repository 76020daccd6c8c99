import numpy as np
import pytest
from hypothesis import strategies as st

from dualsim import StateVector


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_state(rng, n, norm=1.0):
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return StateVector(norm * v / np.linalg.norm(v))


@st.composite
def states(draw, max_n=6, min_n=0):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    scale = draw(st.floats(0.0, 1.0))
    return random_state(np.random.default_rng(seed), n, scale)


ACCEPTANCE_RESULTS: dict = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(k, ok, text)``."""

    def record(k, ok, text):
        line = f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {text}"
        ACCEPTANCE_RESULTS.setdefault(k, []).append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        for line in ACCEPTANCE_RESULTS[k]:
            terminalreporter.write_line(line)
