import math

import numpy as np
import pytest

from dualpoisson.process import DiscreteParams, ProcessParams, discretize

FIG2 = ProcessParams(12.0, 1.0, 0.9, 0.1)


@pytest.fixture
def fig2():
    return discretize(FIG2)


def random_points(count, seed=2024, min_ratio=1.001):
    """Non-extremal ``ProcessParams`` with log-uniform rates and steps.

    Rates differ by at least ``min_ratio`` so the generator overlap stays
    away from 1.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        g1, g2 = np.exp(rng.uniform(math.log(0.2), math.log(20.0), size=2))
        if max(g1, g2) / min(g1, g2) < min_ratio:
            continue
        p = rng.uniform(0.02, 0.98)
        dt = math.exp(rng.uniform(math.log(0.01), math.log(0.5)))
        out.append(ProcessParams(float(g1), float(g2), float(p), dt))
    return out


@pytest.fixture
def geometric_half():
    """Single-channel process with Gamma = 1/2."""
    return DiscreteParams(0.5, 0.5, 1.0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[0].lstrip("#"))):
            terminalreporter.write_line(line)
