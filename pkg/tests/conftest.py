import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from synkernel.examples import default_tower, quadratic_tower, ramified_tower

settings.register_profile(
    "default", deadline=None, max_examples=30, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

# seeds drive the library's own generators; hypothesis only picks the seed
seeds = st.integers(min_value=0, max_value=10_000)
small_ints = st.integers(min_value=-6, max_value=6)
nonzero_ints = small_ints.filter(lambda v: v != 0)


@pytest.fixture
def tower():
    return default_tower()


@pytest.fixture
def tower_f2():
    return quadratic_tower()


@pytest.fixture
def tower_e2():
    return ramified_tower()


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)


# acceptance criteria report one line each at the end of the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=int):
        ok, line = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {line}")
