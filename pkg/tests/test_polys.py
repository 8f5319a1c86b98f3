import pytest
from hypothesis import given
from hypothesis import strategies as st

from arith_hilbert.exactlog import DomainError
from arith_hilbert.polys import HomoPoly, PolyParseError, divides, monomial_exponents, parse_poly


def test_parse_and_print():
    f = parse_poly("x0^2 + x1^2 - x2^2")
    assert (f.n, f.delta) == (2, 2)
    assert str(f) == "x0^2+x1^2-x2^2"
    g = parse_poly("6*x0*x1 - 9*x1^2")
    assert g.coeffs == {(1, 1): 6, (0, 2): -9}


def test_parse_explicit_n():
    f = parse_poly("x0^3", 2)
    assert f.n == 2 and f.coeffs == {(3, 0, 0): 1}


def test_parse_inhomogeneous_reports_position():
    with pytest.raises(PolyParseError) as err:
        parse_poly("x0^2+x1")
    assert err.value.position == 5
    assert "degree 1" in str(err.value)


@pytest.mark.parametrize("text", ["", "x0^2+", "x0 x1", "x0^2 + y1", "3*"])
def test_parse_errors(text):
    with pytest.raises(PolyParseError):
        parse_poly(text)


def test_json_round_trip():
    f = parse_poly("3*x0^2*x2 - 7*x1*x2^2 + x2^3")
    assert HomoPoly.from_json(f.to_json()) == f


def test_monomial_count():
    from math import comb

    for n in range(0, 4):
        for D in range(0, 7):
            assert len(monomial_exponents(n, D)) == comb(n + D, n)


def test_divides_examples():
    assert divides(parse_poly("x0+x1"), parse_poly("x0^2-x1^2"))
    assert not divides(parse_poly("x0^2+x1^2"), parse_poly("x0^3", 1))
    assert not divides(parse_poly("x0^2+x1^2-x2^2"), parse_poly("x0*x1*x2"))


def test_divides_by_zero_rejected():
    with pytest.raises(DomainError):
        divides(HomoPoly(1, 1, {}), parse_poly("x0+x1"))


small_coef = st.integers(-4, 4)


@st.composite
def forms(draw, n=2, max_deg=3):
    d = draw(st.integers(1, max_deg))
    vec = draw(st.lists(small_coef, min_size=len(monomial_exponents(n, d)), max_size=len(monomial_exponents(n, d))))
    f = HomoPoly.from_vector(n, d, vec)
    if f.is_zero():
        f = HomoPoly.variable(0, n) ** d
    return f


@given(forms(), forms())
def test_product_is_divisible(f, g):
    assert divides(f, f * g)


@given(forms(), forms(), st.tuples(*(st.integers(-5, 5) for _ in range(3))))
def test_evaluation_is_multiplicative(f, g, x):
    assert (f * g)(x) == f(x) * g(x)
