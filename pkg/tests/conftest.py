import numpy as np
import pytest

from slideocam import DesignParams


@pytest.fixture
def baseline():
    """Two conjugate single-lobe cams, p=50, e=9, a4=10."""
    return DesignParams(p=50.0, n=1, m=2, e=9.0, a4=10.0, b=4.25)


@pytest.fixture
def rng():
    return np.random.default_rng(20051)


def random_designs(rng, count):
    """Designs with eta > 1/(2 pi) and rollers that do not interfere."""
    out = []
    while len(out) < count:
        n = int(rng.integers(1, 6))
        p = float(rng.uniform(20, 80))
        eta = float(rng.uniform(0.18, 1.0))
        a4 = float(rng.uniform(0.05, 0.95)) * p / (2 * n)
        out.append(DesignParams.from_eta(p=p, n=n, m=int(rng.integers(1, 4)),
                                         eta=eta, a4=a4, b=4.25))
    return out


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
