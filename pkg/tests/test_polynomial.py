import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polycert.polynomial import (
    ParseError,
    Polynomial,
    PolynomialError,
    PolynomialSystem,
    format_polynomial,
    parse_polynomial,
)

NONNEG_NOT_SOS = "x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1"


def test_parse_basic_terms():
    f = parse_polynomial("x1^2*x2 - 3", ["x1", "x2"])
    assert f.terms == {(2, 1): Fraction(1), (0, 0): Fraction(-3)}


def test_parse_zero():
    f = parse_polynomial("0", ["x"])
    assert f.is_zero()
    assert f.terms == {}


def test_parse_quartic_mixed_support():
    f = parse_polynomial(NONNEG_NOT_SOS, ["x", "y"])
    assert f.support() == {(4, 2), (2, 4), (2, 2), (0, 0)}
    assert f.coefficient((2, 2)) == -3


def test_parse_rational_and_decimal_coefficients():
    f = parse_polynomial("1/2*x + 0.25", ["x"])
    assert f.coefficient((1,)) == Fraction(1, 2)
    assert f.coefficient((0,)) == Fraction(1, 4)


def test_parse_repeated_variable_factors_accumulate():
    f = parse_polynomial("x*x*y^2", ["x", "y"])
    assert f.terms == {(2, 2): Fraction(1)}


@pytest.mark.parametrize(
    "text, needle",
    [
        ("x + ", "dangling"),
        ("x^-2", "negative exponent"),
        ("z + 1", "unknown variable"),
        ("x 2", "unexpected token"),
        ("@", "unexpected character"),
    ],
)
def test_parse_errors_carry_position(text, needle):
    with pytest.raises(ParseError) as err:
        parse_polynomial(text, ["x", "y"])
    assert needle in str(err.value)
    assert "position" in str(err.value)


def test_evaluate_simple():
    f = parse_polynomial("x1^2 + x2^2", ["x1", "x2"])
    assert f.evaluate((1.0, 2.0)) == 5.0
    assert Polynomial.zero(2).evaluate((3.0, 4.0)) == 0.0


def test_evaluate_mixed_sextic_at_ones():
    f = parse_polynomial(NONNEG_NOT_SOS, ["x", "y"])
    assert f.evaluate((1.0, 1.0)) == 0.0
    assert f.evaluate_exact((1, 1)) == 0


def test_evaluate_dimension_mismatch():
    f = parse_polynomial("x", ["x"])
    with pytest.raises(PolynomialError):
        f.evaluate((1.0, 2.0))


def test_differentiate_cubic_gradient_identity():
    f = parse_polynomial("x^3", ["x"])
    df = f.differentiate(1)
    assert df.terms == {(2,): Fraction(3)}
    x_over_3 = Polynomial(1, {(1,): Fraction(1, 3)})
    assert x_over_3 * df == f  # f lies in the ideal generated by f'


def test_differentiate_constant_and_power_rule():
    assert Polynomial.constant(2, 7).differentiate(1).is_zero()
    f = parse_polynomial("x1^2*x2", ["x1", "x2"])
    assert f.differentiate(2).terms == {(2, 0): Fraction(1)}


def test_differentiate_index_out_of_range():
    f = parse_polynomial("x", ["x"])
    with pytest.raises(PolynomialError):
        f.differentiate(2)
    with pytest.raises(PolynomialError):
        f.differentiate(0)


def test_support_examples():
    f = parse_polynomial("x^3 + y^3 + x*y", ["x", "y"])
    assert f.support() == {(3, 0), (0, 3), (1, 1)}
    assert Polynomial.zero(2).support() == frozenset()


def test_degree_of_zero_is_minus_infinity():
    assert Polynomial.zero(3).degree() == -math.inf
    assert Polynomial.constant(3, 5).degree() == 0


def test_no_zero_coefficients_after_arithmetic():
    f = parse_polynomial("x + y", ["x", "y"])
    g = parse_polynomial("x - y", ["x", "y"])
    assert (f + g).terms == {(1, 0): Fraction(2)}
    assert (f - f).terms == {}
    h = f * g  # x^2 - y^2
    assert all(c != 0 for c in h.terms.values())
    assert (1, 1) not in h.terms


def test_system_requires_shared_dimension():
    with pytest.raises(PolynomialError):
        PolynomialSystem([Polynomial.zero(1), Polynomial.zero(2)])
    with pytest.raises(PolynomialError):
        PolynomialSystem([])


def test_hessian_is_symmetric_object_equal():
    f = parse_polynomial("x^3*y + x*y^2", ["x", "y"])
    h = f.hessian()
    assert h[0][1] is h[1][0]


# -- property tests ----------------------------------------------------------

coeffs = st.integers(min_value=-5, max_value=5).map(Fraction)
exponents2 = st.tuples(
    st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3)
)
polys2 = st.dictionaries(exponents2, coeffs, max_size=4).map(
    lambda t: Polynomial(2, t)
)


@settings(max_examples=60, deadline=None)
@given(polys2, polys2, st.sampled_from([1, 2]))
def test_product_rule_exact(f, g, i):
    lhs = (f * g).differentiate(i)
    rhs = f.differentiate(i) * g + f * g.differentiate(i)
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(polys2, polys2, st.tuples(coeffs, coeffs))
def test_evaluation_is_ring_homomorphism(f, g, point):
    assert (f + g).evaluate_exact(point) == f.evaluate_exact(point) + g.evaluate_exact(
        point
    )
    assert (f * g).evaluate_exact(point) == f.evaluate_exact(point) * g.evaluate_exact(
        point
    )


@settings(max_examples=60, deadline=None)
@given(polys2)
def test_parse_print_round_trip(f):
    text = format_polynomial(f, ["x", "y"])
    assert parse_polynomial(text, ["x", "y"]) == f


def test_float_evaluation_homomorphism_tolerance():
    f = parse_polynomial("x^3 + 2*x*y", ["x", "y"])
    g = parse_polynomial("y^2 - x", ["x", "y"])
    pt = (0.7, -1.3)
    lhs = (f * g).evaluate(pt)
    rhs = f.evaluate(pt) * g.evaluate(pt)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))
