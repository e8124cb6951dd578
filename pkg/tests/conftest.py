import random
from fractions import Fraction

import pytest

import mouldcalc as mc

RANDOM_SEED = 20260823


def bivariate(monomials, x_order=3, y_order=3):
    return mc.BivariateSeries(
        {k: mc.cq(v) if not isinstance(v, tuple) else mc.cq(*v)
         for k, v in monomials.items()},
        x_order, y_order)


@pytest.fixture
def euler_bivariate():
    # A = x + y
    return bivariate({(1, 0): 1, (0, 1): 1}, x_order=4, y_order=1)


@pytest.fixture
def euler_field(euler_bivariate):
    return mc.extract_letters(euler_bivariate)


@pytest.fixture
def trivial_field():
    # A = y, already in normal form
    return mc.extract_letters(bivariate({(0, 1): 1}, x_order=2, y_order=1))


@pytest.fixture
def quadratic_field():
    # letters -1, 0, 1, 2 all present, x-degree <= 2
    A = bivariate({(0, 1): 1, (1, 0): 1, (2, 1): 1, (1, 2): 1, (2, 3): 1},
                  x_order=2, y_order=3)
    return mc.extract_letters(A)


@pytest.fixture
def cubic_field():
    # a second fixed field, distinct letters and rational coefficients
    A = bivariate({(0, 1): 1, (2, 0): Fraction(1, 2), (1, 2): Fraction(-2, 3),
                   (3, 3): Fraction(1, 5)}, x_order=3, y_order=3)
    return mc.extract_letters(A)


def random_saddle_field(rng) -> mc.SaddleNodeField:
    """A pseudo-random polynomial field of y-degree <= 3 and x-degree
    <= 3 satisfying the prepared-form conditions."""
    support = rng.sample([-1, 0, 1, 2], k=rng.choice([1, 2, 2, 3]))
    letters = {}
    for n in sorted(support):
        poly = [Fraction(0)] * 4
        lo = 2 if n == 0 else 1
        for m in range(lo, 4):
            if rng.random() < 0.7:
                poly[m] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        if all(c == 0 for c in poly):
            poly[lo] = Fraction(1)
        letters[n] = [mc.cq(c) for c in poly]
    return mc.SaddleNodeField(letters)


def random_field_suite(count=20, seed=RANDOM_SEED):
    rng = random.Random(seed)
    return [random_saddle_field(rng) for _ in range(count)]
