from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussrr.laurent import (
    LaurentPolynomial,
    ParseError,
    clear_denominators,
    evaluate,
    format_polynomial,
    log_derivative,
    parse,
    substitute,
)


def P(text, n=2):
    return parse(text, n)


def test_parse_reads_terms():
    assert P("1 + x*y^-2").terms == {(0, 0): 1, (1, -2): 1}
    assert P("2*x - 2*x", 1).is_zero()
    assert sorted(P("1+x+y").support) == [(0, 0), (0, 1), (1, 0)]


def test_parse_products_and_powers():
    assert P("(1+x)*(1+y)") == P("1 + x + y + x*y")
    assert P("(x+y)^2") == P("x^2 + 2*x*y + y^2")
    assert P("3x y") == P("3*x*y")
    assert P("x1*x2^-1", 2) == P("x*y^-1")
    assert P("(2+3i)*x", 1).terms == {(1,): 2 + 3j}
    assert P("1.5e1*z", 1).terms == {(1,): 15}


@pytest.mark.parametrize(
    "text,n,fragment",
    [("(bad", 2, "position"), ("1 + ", 2, "position"), ("x + q", 2, "unknown variable"), ("z", 2, "dimension")],
)
def test_parse_errors(text, n, fragment):
    with pytest.raises(ParseError) as err:
        parse(text, n)
    assert fragment in str(err.value)


def test_unbalanced_parenthesis_reports_position():
    with pytest.raises(ParseError) as err:
        parse("(1+x", 2)
    assert err.value.position is not None


def test_evaluate():
    assert evaluate(P("1+x+y"), (1, 1)) == 3
    assert evaluate(P("x^-1", 1), (2,)) == 0.5
    assert evaluate(P("1+x+y"), (-2, 1)) == 0
    with pytest.raises(ValueError):
        evaluate(P("1+x+y"), (0, 1))


def test_log_derivative():
    assert log_derivative(P("1+x+y"), 1) == P("x")
    assert log_derivative(P("x^-1", 1), 1) == P("-x^-1", 1)
    assert log_derivative(P("1+x+y+x*y"), 2) == P("y + x*y")


def test_clear_denominators():
    assert clear_denominators(P("x^-1 + y")) == (P("1 + x*y"), (1, 0))
    assert clear_denominators(P("1+x+y")) == (P("1+x+y"), (0, 0))
    assert clear_denominators(P("x^-2*y^-1 + x")) == (P("1 + x^3*y"), (2, 1))


def test_substitute():
    assert substitute(P("1+x", 1), [[1]], (1,)) == P("1+x", 1)
    assert substitute(P("1+x", 1), [[1]], (2,)) == P("1+2x", 1)
    assert substitute(P("1+x+y"), [[1, 1], [0, 1]], (1, 1)) == P("1 + x + x*y")
    with pytest.raises(ValueError):
        substitute(P("1+x+y"), [[2, 0], [0, 1]], (1, 1))


def test_formatting():
    assert format_polynomial(P("y + x + 1")) == "1 + x + y"
    assert format_polynomial(P("1 - 2*x^-1*y^3")) == "1 - 2*x^-1*y^3"


exponents = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
int_polys = st.dictionaries(exponents, st.integers(-9, 9).filter(bool), min_size=1, max_size=6).map(
    lambda d: LaurentPolynomial(2, d)
)
points = st.tuples(st.complex_numbers(min_magnitude=0.5, max_magnitude=2), st.complex_numbers(min_magnitude=0.5, max_magnitude=2))


@given(int_polys)
def test_format_parse_round_trip(f):
    assert parse(format_polynomial(f), 2) == f


@settings(max_examples=60)
@given(int_polys, int_polys, points)
def test_ring_operations_agree_with_evaluation(f, g, p):
    for h, value in ((f + g, f(p) + g(p)), (f * g, f(p) * g(p)), (f - g, f(p) - g(p))):
        assert abs(h(p) - value) <= 1e-9 * (1 + abs(value))


@given(int_polys)
def test_clearing_gives_polynomial_and_round_trips(f):
    g, s = clear_denominators(f)
    assert g.is_polynomial()
    assert g.shift(tuple(-e for e in s)) == f


@settings(max_examples=60)
@given(int_polys, points, st.sampled_from([[[1, 1], [0, 1]], [[0, 1], [1, 0]], [[2, 1], [1, 1]], [[1, -2], [0, -1]]]))
def test_substitution_matches_pointwise_composition(f, p, M):
    c = (1.5, -0.5j)
    h = substitute(f, M, c)
    # exponent a -> M a, i.e. z_i -> c_i * prod_j z_j^M[j][i]
    image = [c[i] * p[0] ** M[0][i] * p[1] ** M[1][i] for i in range(2)]
    lhs, rhs = h(p), f(image)
    assert abs(lhs - rhs) <= 1e-8 * (1 + sum(abs(cf) for cf in f.coefficients) * 400)
