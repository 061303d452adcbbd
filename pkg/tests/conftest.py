import numpy as np
import pytest

from lctpr import Signal, make_params

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def random_signal(rng, N, start=0, kind="gauss"):
    if kind == "gauss":
        v = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    else:  # uniform in the unit disk
        v = np.sqrt(rng.uniform(0, 1, N)) * np.exp(2j * np.pi * rng.uniform(0, 1, N))
    for k in (0, -1):
        if abs(v[k]) < 0.1:
            v[k] += 0.5
    return Signal(start, v)


def random_params(rng, bmin=0.1, bmax=10.0):
    b = rng.choice([-1.0, 1.0]) * np.exp(rng.uniform(np.log(bmin), np.log(bmax)))
    a, d = rng.uniform(-2, 2, 2)
    return make_params(a, b, (a * d - 1.0) / b, d)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
