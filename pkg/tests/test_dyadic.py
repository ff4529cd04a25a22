from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from s2ap.dyadic import Dyadic


def test_canonical_form():
    assert Dyadic.of(12, 4) == Dyadic(3, 2)
    assert Dyadic.of(0, 9) == Dyadic(0, 0)
    assert Dyadic.of(3, -2) == Dyadic(12, 0)
    with pytest.raises(ValueError):
        Dyadic(2, 1)
    with pytest.raises(ValueError):
        Dyadic(0, 3)


def test_from_fraction():
    assert Dyadic.from_fraction(Fraction(11, 16)) == Dyadic(11, 4)
    with pytest.raises(ValueError):
        Dyadic.from_fraction(Fraction(1, 3))


dyadics = st.builds(Dyadic.of, st.integers(-(1 << 80), 1 << 80), st.integers(0, 90))


@given(dyadics, dyadics)
def test_arithmetic_matches_fraction(x, y):
    fx, fy = x.to_fraction(), y.to_fraction()
    assert (x + y).to_fraction() == fx + fy
    assert (x - y).to_fraction() == fx - fy
    assert (x * y).to_fraction() == fx * fy
    assert (x < y) == (fx < fy)
    assert x.half(3).to_fraction() == fx / 8


@given(dyadics)
def test_json_round_trip(x):
    assert Dyadic.from_json(x.to_json()) == x
    assert isinstance(x.to_json()["num"], str)


def test_mixed_comparisons():
    assert Dyadic(1, 1) == Fraction(1, 2)
    assert Dyadic(3, 2) > Dyadic(1, 1)
    assert Dyadic(4) == 4
    assert hash(Dyadic(1, 1)) == hash(Fraction(1, 2))
