from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from liftlab.gq import I, ONE, ZERO, GaussianRational, as_gq

gqs = st.builds(GaussianRational, st.fractions(max_denominator=50), st.fractions(max_denominator=50))


def test_normal_form_is_structural():
    a = GaussianRational(Fraction(2, 4), Fraction(-6, 8))
    b = GaussianRational(Fraction(1, 2), Fraction(-3, 4))
    assert a == b and hash(a) == hash(b)
    assert str(a) == "1/2-3/4*i"


def test_real_values_hash_like_fractions():
    for q in (Fraction(1, 3), Fraction(-7, 2), Fraction(5), Fraction(0)):
        assert hash(GaussianRational(q)) == hash(q)
        assert GaussianRational(q) == q


def test_imaginary_unit():
    assert I * I == -ONE
    assert (1 + I) * (1 - I) == 2
    assert (1 + I).inverse() == GaussianRational(Fraction(1, 2), Fraction(-1, 2))


def test_as_gq_parses_text():
    assert as_gq("1/2") == Fraction(1, 2)
    assert as_gq("i") == I
    assert as_gq(3) == 3


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


@given(gqs, gqs, gqs)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == ONE
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))
