import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from mpga.algebra import M2, M3, M4, Multivector

settings.register_profile(
    "repo",
    derandomize=True,
    max_examples=int(os.environ.get("MPGA_HYPOTHESIS_EXAMPLES", "60")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

SEED = 20240611
SPACE_LIST = [M2, M3, M4]


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_mv(rng, sig, grade=None, scale=1.0):
    c = rng.normal(size=sig.size) * scale
    if grade is not None:
        c = np.where(sig.tables.grade == grade, c, 0.0)
    return Multivector(sig, c)


def random_bivector(rng, sig):
    return random_mv(rng, sig, 2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
