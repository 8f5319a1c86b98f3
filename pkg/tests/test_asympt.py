import json
import random
from fractions import Fraction
from importlib import resources

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arith_hilbert.asympt import (
    DEFAULT_EPSILON,
    ENVELOPES,
    EnvelopeVerdict,
    a3_lower,
    b0_closed_part,
    b0_lower,
    c_envelope,
    euler_maclaurin_check,
    load_validity_table,
    q_envelope,
    remainder_pair,
    s_envelope,
    scan_validity,
)
from arith_hilbert.certificates import BoundCertificate, NotCertified, Verdict
from arith_hilbert.combinat import c_exact, q_exact, s_exact
from arith_hilbert.exactlog import Comparison, DomainError, LogForm, lf_compare, lf_eval
from arith_hilbert.exactlog import lf_from_log_rational as LOG


def test_a1_lower_at_2_10():
    lo, _ = remainder_pair("A1", 2, 10)
    expected = -(2**5) * Fraction(21, 2) * LOG(Fraction(21, 2)) - (
        Fraction(3, 2) * LOG(Fraction(3, 2)) + Fraction(1, 2) - Fraction(1, 2) * LogForm.log_2pi()
    )
    assert lo == expected


def test_a4_base_case_is_minus_a3():
    for D in (2, 5, 17):
        lo, hi = remainder_pair("A4", 1, D)
        assert lo == hi == -a3_lower(D)


def test_a3_pair_ordered():
    lo, hi = remainder_pair("A3", 1, 4)
    assert lf_compare(lo, hi, 128) is Comparison.LESS


def test_remainder_domain_errors():
    with pytest.raises(DomainError):
        remainder_pair("A1", 2, 1)
    with pytest.raises(DomainError):
        remainder_pair("A7", 2, 5)
    with pytest.raises(DomainError):
        s_envelope(1, 5)


def test_epsilon_range_checked():
    with pytest.raises(DomainError):
        remainder_pair("A1", 2, 10, Fraction(1, 6))


@pytest.mark.parametrize(
    "fn, exact, n, D",
    [
        (s_envelope, s_exact, 2, 10),
        (s_envelope, s_exact, 3, 20),
        (q_envelope, q_exact, 2, 10),
        (q_envelope, q_exact, 3, 15),
        (c_envelope, c_exact, 1, 10),
        (c_envelope, c_exact, 2, 20),
    ],
)
def test_envelope_contains_exact(fn, exact, n, D):
    env = fn(n, D)
    assert env.verdict is EnvelopeVerdict.CERTIFIED
    assert env.exact == exact(n, D)
    assert env.contains(env.exact, 128)


def test_small_d_envelopes_carry_a_verdict():
    for fn in (s_envelope, q_envelope):
        env = fn(2, 2) if fn is q_envelope else fn(2, 3)
        assert env.verdict in (EnvelopeVerdict.CERTIFIED, EnvelopeVerdict.OUT_OF_VALIDATED_RANGE)
        assert (env.verdict is EnvelopeVerdict.CERTIFIED) == env.contains(env.exact, 256)


def test_c_at_two_is_negative():
    for n in range(1, 5):
        env = c_envelope(n, 2)
        assert float(env.exact) < 0
        assert float(env.lower) < 0


@pytest.mark.xfail(strict=True, reason="remainder widths at D = 2 push the midpoint above zero for n >= 2")
def test_c_envelope_midpoint_negative_at_two():
    assert all(c_envelope(n, 2).midpoint() < 0 for n in range(1, 5))


def test_envelope_json():
    obj = c_envelope(2, 40).to_json()
    assert obj["verdict"] == "OutOfValidatedRange"
    assert set(obj["counterexample"]) == {"exact_minus_upper"}
    json.dumps(obj)


def test_validity_table_schema():
    rows = load_validity_table()
    assert len(rows) == 10
    for row in rows:
        assert set(row) == {"n", "kind", "D0", "checked_up_to", "precision_bits"}
        assert row["precision_bits"] == 256


@pytest.mark.parametrize("kind, n", [("S", 2), ("Q", 3), ("C1", 1)])
def test_validity_rows_reproduce(kind, n):
    row, failures = scan_validity(kind, n, 60)
    stored = next(r for r in load_validity_table() if r["kind"] == kind and r["n"] == n)
    assert row == stored
    assert not failures


def test_counterexamples_are_exact_failures():
    text = resources.files("arith_hilbert").joinpath("data/envelope_counterexamples.json").read_text()
    certs = [BoundCertificate.from_json(c) for c in json.loads(text)]
    assert len(certs) == 43
    for c in certs[::7]:
        n, D = c.witnesses["n"], c.witnesses["D"]
        assert c.verdict is Verdict.FAIL
        assert c.lhs == c_exact(n, D)
        assert lf_eval(c.lhs - c.rhs, 256).certainly_gt(0)


def test_b0_n2_negative():
    res = b0_lower(2)
    assert res.value_lower.hi < 0
    assert res.value_lower.hi <= (lf_eval(res.closed_part, 128) + res.grid_inf).hi


def test_b0_degenerate_search_is_weaker():
    assert b0_lower(3, 1, 1).value_lower.lo <= b0_lower(3).value_lower.lo


def test_b0_monotone_in_search_range():
    vals = [b0_lower(3, D_max, 16).value_lower.lo for D_max in (16, 32, 64, 128)]
    assert vals == sorted(vals)


def test_b0_below_every_sampled_grid_value():
    from arith_hilbert.asympt import a4_pair

    n = 2
    res = b0_lower(n)
    closed = lf_eval(b0_closed_part(n), 128)
    rng = random.Random(3)
    for _ in range(30):
        delta = rng.randint(1, 40)
        D = rng.randint(delta + 1, 200)
        low, _ = a4_pair(n, D)
        _, up = a4_pair(n, D - delta) if D - delta >= 1 else (None, LogForm.zero())
        ratio = lf_eval(low - up, 128) / (2 ** (n - 1) * delta * D**n)
        assert res.value_lower.lo <= (closed + ratio).lo


def test_b0_reproducible():
    a = b0_lower(2, 64, 16).to_json()
    b = b0_lower(2, 64, 16).to_json()
    assert a == b
    assert "jointly" in b0_lower(2, 8, 4).notes


def test_b0_rejects_small_n():
    with pytest.raises(DomainError):
        b0_lower(1)


def test_em_examples():
    c = euler_maclaurin_check("log", 2, 50)
    assert c.verdict is Verdict.PASS
    assert c.rhs == LogForm.rational(Fraction(49 * 4, 9))
    assert euler_maclaurin_check("log", 3, 3).verdict is Verdict.PASS
    assert euler_maclaurin_check("xlog", 2, 40).verdict is Verdict.PASS
    with pytest.raises(DomainError):
        euler_maclaurin_check("sin", 2, 4)


@given(st.integers(1, 300), st.integers(0, 300), st.sampled_from(["log", "xlog"]))
def test_em_random(p, extra, fid):
    assert euler_maclaurin_check(fid, p, p + extra).passed
