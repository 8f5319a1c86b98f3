import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from arith_hilbert.certificates import Verdict
from arith_hilbert.combinat import c_exact, rank_e, rank_fd
from arith_hilbert.exactlog import Comparison, LogForm, lf_compare, lf_eval
from arith_hilbert.exactlog import lf_from_log_rational as LOG
from arith_hilbert.heights import deg_n_section
from arith_hilbert.hilbert import (
    AmbientModel,
    Sign,
    certified_b0,
    deg_quotient_fd,
    deg_sub_multiplied,
    deg_sym_formula,
    degree_e,
    gram_matrix,
    lattice_degree,
    monomial_basis,
    paper_lower_bound_fd,
    resolve_sign_convention,
    verify_chain,
)
from arith_hilbert.polys import HomoPoly, monomial_exponents, parse_poly

HALF = Fraction(1, 2)


def sympy_degree(basis):
    # independent oracle: Gram determinant through sympy
    det = sympy.Matrix(gram_matrix(basis)).det()
    return -HALF * LOG(Fraction(str(det)))


def test_standard_model():
    m = AmbientModel.standard(3)
    assert m.mu.is_zero()
    assert m.mu_min == -HALF * LOG(4)


def test_gram_examples():
    assert gram_matrix(monomial_basis(1, 2)) == [[1, 0, 0], [0, HALF, 0], [0, 0, 1]]
    assert gram_matrix([parse_poly("x0", 0)]) == [[1]]
    assert gram_matrix([parse_poly("x0+x1"), parse_poly("x0-x1")]) == [[2, 0], [0, 2]]


def test_lattice_degree_examples():
    assert lattice_degree(monomial_basis(1, 2)).value == HALF * LOG(2)
    assert lattice_degree([parse_poly("x0", 1), parse_poly("x1")]).value.is_zero()
    assert lattice_degree([parse_poly("x0^2", 1), parse_poly("x0*x1")]).value == HALF * LOG(2)


def test_dependent_basis_rejected():
    with pytest.raises(ValueError):
        lattice_degree([parse_poly("x0+x1"), parse_poly("2*x0+2*x1")])


def test_sym_formula_examples():
    assert deg_sym_formula(1, 2, sign="paper") == -HALF * LOG(2)
    assert deg_sym_formula(1, 2, sign="gram") == HALF * LOG(2)
    for n in range(1, 4):
        for s in Sign:
            assert deg_sym_formula(n, 1, sign=s).is_zero()


def test_sign_convention_resolves_to_gram():
    assert resolve_sign_convention() is Sign.GRAM


def test_sub_multiplied_examples():
    assert deg_sub_multiplied(parse_poly("x0", 1), 2).value == HALF * LOG(2)
    for d in (1, 2, 4):
        assert deg_sub_multiplied(parse_poly(f"x0^{d}", 1), d).value.is_zero()
    f = parse_poly("x0+x1")
    d = deg_sub_multiplied(f, 2)
    assert d.gram_det == 2
    assert d.value == -HALF * LOG(2)
    assert d.value == sympy_degree([f * parse_poly("x0", 1), f * parse_poly("x1")])


def test_sub_multiplied_rejects_non_primitive():
    with pytest.raises(ValueError):
        deg_sub_multiplied(parse_poly("2*x0+2*x1"), 3)


def test_quotient_examples():
    assert deg_quotient_fd(parse_poly("x0", 1), 2).value.is_zero()
    assert deg_quotient_fd(parse_poly("x0", 1), 3).value.is_zero()
    q = deg_quotient_fd(parse_poly("x0^2+x1^2"), 3)
    assert q.gram_det == Fraction(1, 16)
    assert q.value == 2 * LOG(2)
    with pytest.raises(ValueError):
        deg_quotient_fd(parse_poly("x0^2+x1^2"), 2)


def test_gram_identity_matches_closed_form():
    for n in range(0, 4):
        for D in range(0, 13):
            assert degree_e(n, D).value == -HALF * c_exact(n, D), (n, D)


def test_gram_identity_against_sympy():
    for n, D in [(1, 4), (2, 3), (3, 2)]:
        assert degree_e(n, D).value == sympy_degree(monomial_basis(n, D))


def test_witness_case():
    d = degree_e(1, 2)
    assert d.gram_det == HALF
    assert c_exact(1, 2) == -LOG(2)


def test_naive_and_theorem_bounds():
    assert paper_lower_bound_fd(2, 2, 4, variant="naive").form == -2 * LOG(3)
    lb = paper_lower_bound_fd(2, 2, 3, variant="theorem_1_1", h_X=LogForm.zero())
    assert lb.form == LogForm.rational(-HALF)
    assert lb.b0.lo == certified_b0(2).lo


def test_etape1_substitution():
    f = parse_poly("x0", 1)
    lb = paper_lower_bound_fd(1, 1, 2, deg_n_section(f), variant="etape1")
    expected = (
        deg_sym_formula(1, 2)
        - deg_sym_formula(1, 1)
        - rank_e(1, 1) * (LogForm.zero() + HALF * LOG(2))
        - rank_fd(1, 1, 2) * HALF * LOG(rank_e(1, 2))
    )
    assert lb.form == expected


def test_variants_need_inputs():
    with pytest.raises(ValueError):
        paper_lower_bound_fd(2, 2, 3, variant="prop_numerical")
    with pytest.raises(ValueError):
        paper_lower_bound_fd(2, 2, 3, variant="final_classic")
    with pytest.raises(ValueError):
        paper_lower_bound_fd(2, 2, 2, LogForm.zero(), variant="prop_numerical")
    with pytest.raises(ValueError):
        paper_lower_bound_fd(2, 2, 3, variant="nope")


def test_arakelov_variant_adds_constant():
    h = LOG(7)
    a = paper_lower_bound_fd(3, 2, 5, variant="final_arakelov", h_X=h)
    c = paper_lower_bound_fd(3, 2, 5, variant="final_classic", h_X=h)
    d = 2
    diff = (Fraction(11, 6) - 2 * (d + 2) * LOG(2) - 10 * LOG(d + 2)) / (2 * (d + 1))
    assert a.form - c.form == diff


@pytest.mark.parametrize(
    "n, delta, text, Ds",
    [(1, 1, "x0", range(2, 9)), (1, 2, "x0^2+x1^2", range(3, 9)), (2, 2, "x0^2+2*x1^2-3*x2^2+x0*x1", range(3, 7))],
)
def test_verify_chain_examples(n, delta, text, Ds):
    certs = verify_chain(n, delta, parse_poly(text, n), Ds)
    exact = [c for c in certs if "step-one" not in c.ref and "numerical" not in c.ref]
    assert len(exact) == 2 * len(Ds)
    assert all(c.verdict is Verdict.PASS for c in exact)


def test_verify_chain_step_one_passes():
    certs = verify_chain(2, 2, parse_poly("x0^2+x1^2-x2^2"), range(3, 7))
    assert all(c.verdict is Verdict.PASS for c in certs)


def _random_primitive(rng, n, delta):
    while True:
        f = HomoPoly.from_vector(n, delta, [rng.randint(-4, 4) for _ in monomial_exponents(n, delta)])
        if not f.is_zero() and f.content() == 1:
            return f


def test_quotient_slope_above_naive(rng):
    for _ in range(20):
        n = rng.randint(1, 2)
        delta = rng.randint(1, 3)
        f = _random_primitive(rng, n, delta)
        for D in range(delta + 1, 7):
            slope = deg_quotient_fd(f, D).value / rank_fd(n, delta, D)
            naive = paper_lower_bound_fd(n, delta, D, variant="naive").form - HALF * LOG(rank_e(n, D))
            assert lf_compare(naive, slope) is not Comparison.GREATER


@given(st.fractions(min_value=0, max_value=50), st.fractions(min_value=0, max_value=50))
def test_theorem_bound_monotone_in_height(a, b):
    lo, hi = sorted((a, b))
    x = paper_lower_bound_fd(2, 3, 5, variant="theorem_1_1", h_X=LogForm.rational(lo)).interval(128)
    y = paper_lower_bound_fd(2, 3, 5, variant="theorem_1_1", h_X=LogForm.rational(hi)).interval(128)
    assert x.lo <= y.lo
