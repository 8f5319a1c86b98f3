from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from arith_hilbert.exactlog import (
    Comparison,
    DomainError,
    Interval,
    LogForm,
    lf_compare,
    lf_eval,
    lf_from_log_rational,
    log_factorial,
)

def exact(x) -> Fraction:
    """Exact rational value of an mpf."""
    x = mpmath.mpf(x)
    return Fraction(int(x.man)) * Fraction(2) ** int(x.exp)


pos_rationals = st.fractions(min_value=Fraction(1, 10**6), max_value=10**6).filter(lambda q: q > 0)


def test_log_of_one_is_zero():
    assert lf_from_log_rational(1).is_zero()


def test_log_of_prime():
    f = lf_from_log_rational(2)
    assert f.log_coeffs == {2: 1}
    assert f.const_part == 0 and f.pi_coeff == 0


def test_log_of_nine_halves():
    assert lf_from_log_rational(Fraction(9, 2)).log_coeffs == {3: 2, 2: -1}


def test_log_of_nonpositive_rejected():
    for x in (0, -3, Fraction(-1, 2)):
        with pytest.raises(DomainError):
            lf_from_log_rational(x)


def test_eval_zero_is_point():
    iv = lf_eval(LogForm.zero(), 64)
    assert iv.lo == 0 and iv.hi == 0


def test_eval_log2_and_log_pi():
    mpmath.mp.prec = 200
    assert lf_eval(lf_from_log_rational(2), 64).contains(exact(mpmath.log(2)))
    iv = lf_eval(LogForm.rational(1) + LogForm.log_pi(), 64)
    assert iv.contains(exact(1 + mpmath.log(mpmath.pi)))
    assert iv.hi - iv.lo < 1e-15


def test_compare_examples():
    log2, log3 = lf_from_log_rational(2), lf_from_log_rational(3)
    assert lf_compare(log2, log2) is Comparison.EQUAL
    assert lf_compare(log2, log3) is Comparison.LESS
    assert lf_compare(3 * log2, 2 * log3) is Comparison.LESS
    assert lf_compare(log3, log2) is Comparison.GREATER


def test_compare_undecided_with_tiny_budget():
    # log(2^53 + 1) - log(2^53) is about 1e-16; 16 bits cannot separate it from 0
    a = lf_from_log_rational(2**53 + 1)
    b = lf_from_log_rational(2**53)
    assert lf_compare(a, b, 16) is Comparison.UNDECIDED
    assert lf_compare(a, b, 256) is Comparison.GREATER


def test_log2pi_splits():
    assert LogForm.log_2pi() == lf_from_log_rational(2) + LogForm.log_pi()


def test_json_round_trip():
    f = Fraction(3, 7) + Fraction(-5, 2) * lf_from_log_rational(Fraction(12, 5)) + 4 * LogForm.log_pi()
    obj = f.to_json()
    assert obj["const"] == "3/7"
    assert LogForm.from_json(obj) == f


def test_str_form():
    assert str(-lf_from_log_rational(2)) == "-1 * log(2)"


def test_log_factorial_matches_product():
    for k in range(0, 40):
        prod = 1
        for j in range(2, k + 1):
            prod *= j
        assert log_factorial(k) == lf_from_log_rational(prod)


def test_logform_is_immutable():
    f = lf_from_log_rational(2)
    with pytest.raises(AttributeError):
        f.foo = 1


def test_interval_arithmetic_encloses():
    a = Interval.exact(Fraction(1, 3), 64)
    b = Interval.exact(Fraction(2, 7), 64)
    assert (a + b).contains(Fraction(13, 21))
    assert (a * b).contains(Fraction(2, 21))
    assert (a / b).contains(Fraction(7, 6))
    assert (a - b).contains(Fraction(1, 21))
    mpmath.mp.prec = 200
    assert a.exp().contains(exact(mpmath.exp(mpmath.mpf(1) / 3)))


@given(pos_rationals)
def test_round_trip_inverse(q):
    assert (lf_from_log_rational(q) + lf_from_log_rational(1 / q)).is_zero()


@given(pos_rationals, pos_rationals)
def test_additivity(a, b):
    assert lf_from_log_rational(a * b) == lf_from_log_rational(a) + lf_from_log_rational(b)


coef = st.fractions(min_value=-100, max_value=100, max_denominator=50)


@st.composite
def logforms(draw):
    primes = draw(st.lists(st.sampled_from([2, 3, 5, 7, 11, 13, 101]), max_size=4, unique=True))
    return LogForm(draw(coef), {p: draw(coef) for p in primes}, draw(coef))


@given(logforms())
def test_nested_refinement(f):
    lo = lf_eval(f, 64)
    hi = lf_eval(f, 256)
    assert lo.lo <= hi.lo and hi.hi <= lo.hi


@given(logforms(), logforms())
def test_compare_antisymmetric(a, b):
    ab, ba = lf_compare(a, b, 256), lf_compare(b, a, 256)
    flip = {Comparison.LESS: Comparison.GREATER, Comparison.GREATER: Comparison.LESS}
    assert flip.get(ab, ab) is ba
