from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coderiv.scalars import (
    Polynomial,
    ScalarError,
    as_rational,
    normalize,
    polynomial_from_json,
    polynomial_to_json,
    rational_from_json,
    rational_to_json,
    scalar_from_json,
    scalar_to_json,
)

from conftest import small_fractions

VARS = ("t1", "t2")


@st.composite
def polys(draw):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), small_fractions, max_size=5))
    return Polynomial(VARS, terms)


def test_normalize_lowest_terms():
    assert normalize(3, -6) == Fraction(-1, 2)
    assert normalize(0, 7) == 0


def test_zero_denominator_rejected():
    with pytest.raises(ScalarError):
        normalize(1, 0)
    with pytest.raises(ScalarError):
        as_rational("1/0")


def test_floats_are_not_exact():
    with pytest.raises(ScalarError):
        as_rational(0.5)


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == Polynomial(VARS)
    assert a * b == b * a


@given(polys(), polys(), small_fractions, small_fractions)
def test_evaluation_is_a_homomorphism(a, b, x, y):
    pt = {"t1": x, "t2": y}
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert (a - b).evaluate(pt) == a.evaluate(pt) - b.evaluate(pt)


@given(polys(), polys(), st.integers(0, 4))
def test_truncated_product_matches_truncating_after(a, b, k):
    assert a.mul(b, k) == (a * b).truncate(k)


@given(polys())
def test_json_round_trip(p):
    assert polynomial_from_json(polynomial_to_json(p)) == p
    assert scalar_from_json(scalar_to_json(p)) == p


@given(small_fractions)
def test_rational_json_round_trip(x):
    assert rational_from_json(rational_to_json(x)) == x


def test_missing_variable_is_an_error():
    t1, t2 = Polynomial.gens(VARS)
    with pytest.raises(ScalarError):
        (t1 * t2).evaluate({"t1": 1})


def test_partial_substitution():
    t1, t2 = Polynomial.gens(VARS)
    p = t1 * t1 * t2 + t2
    assert p.substitute({"t1": Fraction(2)}) == 5 * t2
    assert p.substitute({"t2": t1}) == t1 ** 3 + t1


@given(polys().filter(bool))
def test_primitive_has_unit_content(p):
    q = p.primitive()
    assert q.content() == 1
    assert q.leading_coefficient() > 0
    ratio = {q.terms[e] / c for e, c in p.terms.items()}
    assert len(ratio) == 1


def test_printing():
    t1, t2 = Polynomial.gens(VARS)
    assert str(t1 * t1 * 3 - t2 / 2) == "3*t1^2 - (1/2)*t2"
    assert str(Polynomial(VARS)) == "0"
