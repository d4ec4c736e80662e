import pytest

from cotlarlab.quadring import QInt, RingParam


@pytest.fixture
def ring2():
    return RingParam(2, "full")


@pytest.fixture
def ring1():
    return RingParam(1, "full")


@pytest.fixture
def ring7():
    return RingParam(7, "max")


def q(u, v, ring):
    return QInt(u, v, ring)
