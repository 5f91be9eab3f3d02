import random

import pytest

from fields import RATIONALS, prime_field
from fox import abelianization, knot_table
from laurent import LaurentPolynomial
from reps import load_representation


@pytest.fixture
def rng():
    return random.Random(1729)


@pytest.fixture
def f7():
    return prime_field(7)


@pytest.fixture
def f101():
    return prime_field(101)


@pytest.fixture
def t():
    return LaurentPolynomial.variable(RATIONALS)


@pytest.fixture
def trefoil():
    return knot_table("trefoil")


@pytest.fixture
def figure8():
    return knot_table("figure8")


@pytest.fixture
def trefoil_phi(trefoil):
    return abelianization(trefoil)


@pytest.fixture
def trefoil_rep(trefoil):
    return load_representation("trefoil_sl2q", trefoil)


@pytest.fixture
def figure8_rep(figure8):
    return load_representation("figure8_sl2qi", figure8)
