import numpy as np
import pytest
from hypothesis import settings

from wickchaos.chaos import ChaosExpansion, MultiIndex
from wickchaos.sampling import random_expansion, trial_rng

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")


def x(i, dim, D, coeff=1.0):
    return ChaosExpansion.variable(i, dim, D, coeff)


def expansion(dim, D, terms):
    """Terms keyed by dense exponent tuples, e.g. {(2, 0): 1.5}."""
    return ChaosExpansion(dim, D, {MultiIndex.from_dense(k): c for k, c in terms.items()})


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def seeded(seed, dim, D, **kw):
    return random_expansion(trial_rng(seed, 0), dim, D, **kw)


# acceptance lines, filled by test_acceptance.py and echoed in the terminal summary
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
