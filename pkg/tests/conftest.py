import random

import pytest

from regressia.core import cube


@pytest.fixture
def rng():
    return random.Random(1234)


def line(n, k=1):
    """The cube [n]^k as a frozenset of tuples."""
    return cube(range(n), k)
