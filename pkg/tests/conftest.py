import random

import pytest
from hypothesis import strategies as st

from extset.family import Family

SEED = 20240601


@pytest.fixture
def rng():
    return random.Random(SEED)


def families(n_min=1, n_max=5, max_size=12):
    """Hypothesis strategy for (small) families over [n]."""
    return st.integers(n_min, n_max).flatmap(
        lambda n: st.lists(st.integers(0, (1 << n) - 1), max_size=max_size).map(lambda ms: Family.of(n, ms))
    )


def family_pairs(n_min=1, n_max=5, max_size=10):
    def build(n):
        fam = st.lists(st.integers(0, (1 << n) - 1), max_size=max_size).map(lambda ms: Family.of(n, ms))
        return st.tuples(fam, fam)

    return st.integers(n_min, n_max).flatmap(build)


def random_family(rng, n, density=0.3):
    return Family.of(n, (m for m in range(1 << n) if rng.random() < density))


def all_families(n):
    """Every family over [n] (2^(2^n) of them; keep n <= 3)."""
    size = 1 << n
    for ind in range(1 << size):
        yield Family.of(n, (s for s in range(size) if ind >> s & 1))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
