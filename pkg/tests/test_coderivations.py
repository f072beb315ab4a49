from fractions import Fraction

import pytest
from hypothesis import given

from coderiv import V21, Coderivation, ParityError, bracket, coboundary, compose, evaluate, is_codifferential
from coderiv.coderivations import (
    CoderivationError,
    ParseError,
    basis_terms,
    coderivation_from_json,
    coderivation_to_json,
    extension_commutator,
    format_coderivation,
    parse_coderivation,
    projected_composite,
)
from coderiv.graded_space import enumerate_words
from coderiv.scalars import Polynomial

from conftest import homogeneous_cochains


def sgn(f, g):
    return -1 if (f.parity or 0) & (g.parity or 0) else 1


@given(homogeneous_cochains(), homogeneous_cochains())
def test_antisymmetry(f, g):
    assert bracket(f, g) == bracket(g, f) * (-sgn(f, g))


@given(homogeneous_cochains(max_terms=3), homogeneous_cochains(max_terms=3), homogeneous_cochains(max_terms=3))
def test_graded_jacobi(f, g, h):
    # [f,[g,h]] = [[f,g],h] + (-1)^{|f||g|} [g,[f,h]]
    lhs = bracket(f, bracket(g, h))
    rhs = bracket(bracket(f, g), h) + bracket(g, bracket(f, h)) * sgn(f, g)
    assert lhs == rhs


@given(homogeneous_cochains(arity=2, max_terms=3), homogeneous_cochains(arity=2, max_terms=3))
def test_bracket_matches_coalgebra_commutator(f, g):
    b = bracket(f, g)
    for n in range(4):
        for w in enumerate_words(n, V21):
            assert evaluate(b, w) == extension_commutator(f, g, w)


@given(homogeneous_cochains(max_terms=3), homogeneous_cochains(max_terms=3))
def test_compose_matches_projected_product(f, g):
    c = compose(f, g)
    n = max(c.arities(), default=0)
    for w in enumerate_words(n, V21):
        assert {k: v for k, v in evaluate(c, w).items() if len(k) == 1} == projected_composite(f, g, w)


@given(homogeneous_cochains(parity=1, arity=2))
def test_odd_self_bracket_is_twice_composite(d):
    assert bracket(d, d) == compose(d, d) * 2


def test_coboundary_squares_to_zero_for_a_codifferential():
    d = parse_coderivation("psi(2,2;3) + psi(2,3;2) - psi(3,2;2) - psi(3,3;3)")
    assert is_codifferential(d)
    for n in (0, 1, 2):
        for w, t in basis_terms(n):
            f = Coderivation.basis(w, t)
            assert not coboundary(d, coboundary(d, f))


def test_non_codifferential_certificate():
    d = parse_coderivation("psi(1,1;3) + psi(1,3;1)")
    res = is_codifferential(d)
    assert not res
    assert res.certificate == bracket(d, d)


def test_even_codifferential_rejected():
    with pytest.raises(ParityError):
        is_codifferential(parse_coderivation("phi(1,1;1)"))


def test_inhomogeneous_bracket_rejected():
    mixed = parse_coderivation("phi(1,1;1) + psi(1,1;3)")
    with pytest.raises(ParityError):
        bracket(mixed, mixed)
    even, odd = mixed.split_parity()
    assert even + odd == mixed


def test_evaluate_koszul_sign():
    # psi^{2}_{3} is odd; acting after the odd letter 3 picks up a sign
    f = Coderivation.basis((2,), 3)
    assert evaluate(f, (3, 2)) == {(3, 3): -1}
    assert evaluate(f, (1, 2)) == {(1, 3): 1}
    assert evaluate(f, (2, 2)) == {(3, 2): 1, (2, 3): 1}


@given(homogeneous_cochains())
def test_text_round_trip(f):
    assert parse_coderivation(format_coderivation(f)) == f


@given(homogeneous_cochains())
def test_json_round_trip(f):
    assert coderivation_from_json(coderivation_to_json(f)) == f


def test_polynomial_coefficients_round_trip():
    d = parse_coderivation("psi(3,1;2)*(-1/2*t1^2*t2 + t2) + psi(2,2;3) + 3*t1*psi(1,1;3)")
    assert d.coeff((1, 1), 3) == 3 * Polynomial.variable(("t1", "t2"), "t1")
    again = parse_coderivation(format_coderivation(d), params=("t1", "t2"))
    assert again == d
    assert coderivation_from_json(coderivation_to_json(d)) == d
    assert d.specialize({"t1": 0, "t2": 0}) == parse_coderivation("psi(2,2;3)")


@pytest.mark.parametrize(
    "text, pos",
    [
        ("psi(2,2;3) + ", 13),
        ("psi(2,2;3) $ psi(1,1;3)", 11),
        ("phi(2,2;3)", 0),
        ("psi(2,4;3)", 0),
        ("psi(2,2;3) psi(1,1;3)", 11),
    ],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as err:
        parse_coderivation(text)
    assert err.value.pos == pos
    assert "position" in str(err.value)


def test_inhomogeneous_sum_parses_but_has_no_parity():
    # psi(2,2;3) is odd, psi(2,3;3) is even: the sum is not a single parity
    with pytest.raises(ParseError):
        parse_coderivation("psi(2,2;3) + psi(2,3;3)")
    f = parse_coderivation("psi(2,2;3) + phi(2,3;3)")
    with pytest.raises(ParityError):
        f.parity


def test_zero_denominator():
    with pytest.raises(ParseError):
        parse_coderivation("1/0*psi(2,2;3)")


def test_truncate_and_arity():
    d = parse_coderivation("psi(2,2;3)*t1^3 + psi(1;3)*t1")
    assert d.truncate(2) == parse_coderivation("psi(1;3)*t1", params=("t1",))
    assert d.arities() == {1, 2}
    assert d.arity_part(1) == parse_coderivation("psi(1;3)*t1", params=("t1",))


def test_space_mismatch():
    from coderiv import GradedSpace

    other = Coderivation.basis((1,), 1, space=GradedSpace(1, 1))
    with pytest.raises(CoderivationError):
        bracket(other, Coderivation.basis((1,), 1))


def test_fraction_arithmetic_is_exact():
    f = Coderivation.basis((1, 1), 3, Fraction(1, 3))
    assert (f * 3).coeff((1, 1), 3) == 1
    assert not (f - f)
