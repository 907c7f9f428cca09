import numpy as np
import pytest

from genmi import Channel, Pmf, make_channel, make_pmf


def rand_pmf(rng: np.random.Generator, m: int, floor: float = 0.0) -> Pmf:
    return make_pmf(rng.random(m) + floor)


def rand_channel(rng: np.random.Generator, m: int, n: int, floor: float = 0.0) -> Channel:
    return make_channel(rng.random((m, n)) + floor)


@pytest.fixture
def bsc10() -> Channel:
    return make_channel([[0.9, 0.1], [0.1, 0.9]])


@pytest.fixture
def uniform2() -> Pmf:
    return make_pmf([0.5, 0.5])


def binary_entropy(eps: float) -> float:
    """Independent oracle: -e log e - (1-e) log(1-e), in nats."""
    return float(-eps * np.log(eps) - (1 - eps) * np.log(1 - eps))
