import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from sarymsakov.matrix import BooleanPattern  # noqa: E402


def as_sets(p: BooleanPattern):
    return [frozenset(j for j in range(p.n) if r >> j & 1) for r in p.rows]


@st.composite
def patterns(draw, min_n=1, max_n=6, n=None):
    n = n if n is not None else draw(st.integers(min_n, max_n))
    rows = draw(st.lists(st.integers(1, (1 << n) - 1), min_size=n, max_size=n))
    return BooleanPattern(n, tuple(rows))


@st.composite
def pattern_pairs(draw, min_n=2, max_n=6):
    n = draw(st.integers(min_n, max_n))
    return draw(patterns(n=n)), draw(patterns(n=n))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
