from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from agelab.exact import ExactComplex, format_rational

fractions = st.fractions(max_denominator=64)
exact = st.builds(ExactComplex, fractions, fractions)


def test_coerce_float_is_exact():
    z = ExactComplex.coerce(0.1)
    assert z.re == Fraction(0.1)
    assert z.im == 0


def test_coerce_string_and_complex():
    assert ExactComplex.coerce("3/4") == ExactComplex(Fraction(3, 4))
    assert ExactComplex.coerce(1 + 2j) == ExactComplex(Fraction(1), Fraction(2))


@given(exact, exact, exact)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ExactComplex(Fraction(0))


@given(exact)
def test_abs2_matches_conjugate_product(z):
    assert (z * z.conjugate()) == ExactComplex(z.abs2())


@pytest.mark.parametrize("q, text", [(Fraction(3), "3"), (Fraction(-1, 4), "-1/4"), (Fraction(0), "0")])
def test_format_rational(q, text):
    assert format_rational(q) == text
    assert Fraction(text) == q
