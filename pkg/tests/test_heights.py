import random
from fractions import Fraction
from math import comb, isqrt, sqrt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arith_hilbert.combinat import rank_e
from arith_hilbert.exactlog import DomainError, LogForm, lf_compare, Comparison, lf_from_log_rational as LOG
from arith_hilbert.heights import (
    NormGapBounds,
    arakelov_height_point,
    bombieri_inner,
    bombieri_norm_sq,
    classic_height_poly,
    content_and_primitive,
    deg_n_section,
    normalize_point,
    product_inequality_check,
    sup_norm_estimate,
    weil_height,
)
from arith_hilbert.polys import HomoPoly, monomial_exponents, parse_poly
from arith_hilbert.certificates import Verdict


def test_normalize_point():
    assert normalize_point([2, 6]).coords == (1, 3)
    assert normalize_point([-3, -4]).coords == (3, 4)
    assert normalize_point([0, -5, 10]).coords == (0, 1, -2)
    with pytest.raises(DomainError):
        normalize_point([0, 0])


def test_point_heights():
    assert weil_height(normalize_point([1, 0, 0])).is_zero()
    assert weil_height(normalize_point([3, 4])) == 2 * LOG(2)
    assert weil_height(normalize_point([3, 5])) == LOG(5)
    assert arakelov_height_point(normalize_point([1, 0])).is_zero()
    assert arakelov_height_point(normalize_point([3, 4])) == LOG(5)
    assert arakelov_height_point(normalize_point([1, 1, 1])) == LOG(3) / 2


def test_content():
    c, p = content_and_primitive(parse_poly("2*x0+4*x1"))
    assert c == 2 and p == parse_poly("x0+2*x1")
    assert content_and_primitive(parse_poly("x0^2", 1))[0] == 1
    c, p = content_and_primitive(parse_poly("6*x0*x1-9*x1^2"))
    assert c == 3 and p == parse_poly("2*x0*x1-3*x1^2")
    with pytest.raises(DomainError):
        content_and_primitive(HomoPoly(1, 2, {}))


def test_classic_height():
    assert classic_height_poly(parse_poly("x0^4", 2)).is_zero()
    assert classic_height_poly(parse_poly("3*x0^2-7*x1*x2")) == LOG(7)
    assert classic_height_poly(parse_poly("2*x0+4*x1")) == LOG(2)


def test_bombieri_examples():
    x0d = parse_poly("x0^5", 1)
    assert bombieri_inner(x0d, x0d) == 1
    xy = parse_poly("x0*x1")
    assert bombieri_inner(xy, xy) == Fraction(1, 2)
    assert bombieri_inner(parse_poly("x0^2", 1), parse_poly("x1^2", 1)) == 0
    assert bombieri_norm_sq(parse_poly("x0^2+x1^2")) == 2
    with pytest.raises(DomainError):
        bombieri_norm_sq(HomoPoly(1, 2, {}))
    with pytest.raises(DomainError):
        bombieri_inner(parse_poly("x0", 1), xy)


def test_bombieri_weight_by_tensor_minimisation():
    # x0*x1 is the image of a e01 + (1 - a) e10; the quotient norm minimises a^2 + (1 - a)^2
    best = min(Fraction(a, 1000) ** 2 + (1 - Fraction(a, 1000)) ** 2 for a in range(1001))
    assert best == bombieri_norm_sq(parse_poly("x0*x1"))


def test_deg_n_examples():
    assert deg_n_section(parse_poly("x0^3", 2)).is_zero()
    assert deg_n_section(parse_poly("x0*x1")) == LOG(2) / 2
    assert deg_n_section(parse_poly("x0^2+x1^2")) == -LOG(2) / 2
    # content does not change the degree of the section
    assert deg_n_section(parse_poly("3*x0^2+3*x1^2")) == deg_n_section(parse_poly("x0^2+x1^2"))


def test_norm_gap_bounds():
    g = NormGapBounds.for_rank(2, 3)
    assert g.r == 10 and g.r0_hi == LOG(10) / 2 and g.r0_lo.is_zero()


def test_sup_examples():
    assert sup_norm_estimate(parse_poly("x0", 1))[0] == pytest.approx(1, abs=1e-12)
    est, z = sup_norm_estimate(parse_poly("x0*x1"))
    assert est == pytest.approx(0.5, abs=1e-9)
    assert abs(abs(z[0]) - sqrt(0.5)) < 1e-4
    assert sup_norm_estimate(parse_poly("x0^2+x1^2"))[0] == pytest.approx(1, abs=1e-9)


def test_sup_is_seed_deterministic():
    f = parse_poly("x0^3-3*x0*x1^2+2*x2^3")
    assert sup_norm_estimate(f, seed=5)[0] == sup_norm_estimate(f, seed=5)[0]


def test_product_inequality_examples():
    c = product_inequality_check(parse_poly("x0", 1), parse_poly("x1"))
    assert c.verdict is Verdict.PASS and c.witnesses["equality"]
    c = product_inequality_check(parse_poly("x0", 1), parse_poly("x0", 1))
    assert c.verdict is Verdict.PASS and not c.witnesses["equality"]


def _random_form(rng, n, d, lo=-5, hi=5):
    while True:
        f = HomoPoly.from_vector(n, d, [rng.randint(lo, hi) for _ in monomial_exponents(n, d)])
        if not f.is_zero():
            return f


def test_random_cubic_pairs_pass(rng):
    for _ in range(20):
        f, g = _random_form(rng, 2, 3), _random_form(rng, 2, 3)
        assert product_inequality_check(f, g).passed


def test_gauss_multiplicativity(rng):
    for _ in range(1000):
        n = rng.randint(1, 3)
        f = _random_form(rng, n, rng.randint(1, 3), -6, 6)
        g = _random_form(rng, n, rng.randint(1, 3), -6, 6)
        assert (f * g).content() == f.content() * g.content()


def test_sup_within_john_sandwich(rng):
    # lower estimate never exceeds sqrt(r) * ||f||_sym; soft lower side is only logged
    soft_misses = 0
    for _ in range(50):
        n = rng.randint(1, 2)
        d = rng.randint(1, 3)
        f = _random_form(rng, n, d)
        est, _ = sup_norm_estimate(f, samples=64, refine_iters=30, seed=1)
        sym = sqrt(bombieri_norm_sq(f))
        r = rank_e(n, d)
        assert est <= sqrt(r) * sym * (1 + 1e-12)
        soft_misses += est < sym / sqrt(r) - 1e-6
    print(f"sup estimates below ||f||/sqrt(r): {soft_misses} of 50")


pts = st.lists(st.integers(-10**6, 10**6), min_size=2, max_size=6).filter(any)


@given(pts)
def test_height_sandwich(raw):
    p = normalize_point(raw)
    h, ha = weil_height(p), arakelov_height_point(p)
    # compare squares exactly: max^2 <= sum <= (n+1) max^2
    m = max(abs(x) for x in p.coords)
    assert m * m <= p.norm_sq() <= (p.n + 1) * m * m
    assert lf_compare(h, ha) is not Comparison.GREATER
    assert lf_compare(ha, h + LOG(p.n + 1) / 2) is not Comparison.GREATER


def test_naive_slope_sandwich(rng):
    for _ in range(100):
        n = rng.randint(1, 3)
        d = rng.randint(1, 5 if n < 3 else 3)
        f = _random_form(rng, n, d, -20, 20)
        mid = -deg_n_section(f) - classic_height_poly(f)
        assert lf_compare(-Fraction(n, 2) * LOG(d + 1), mid) is not Comparison.GREATER
        assert lf_compare(mid, Fraction(3 * n, 2) * LOG(d + 1)) is not Comparison.GREATER
