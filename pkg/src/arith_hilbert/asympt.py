"""Explicit remainder constants and two-sided envelopes for S, Q and C.

The remainders ``A1 .. A4`` (lower) and ``A1' .. A4'`` (upper) are returned
as exact LogForms.  A few of them contain irrational factors that are not
LogForms (``e / (pi sqrt n)``, ``D**(n - 1/2 + 3 eps)``, ``sqrt(D)``,
``pi**2 / 6``).  Those factors are replaced by rational brackets rounded in
the safe direction: upward in the upper remainders, downward where they
enter a lower remainder with a negative sign.  Every envelope is therefore
at least as wide as the exact one.
"""

from __future__ import annotations

import enum
import json
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable

import gmpy2

from .certificates import BoundCertificate, NotCertified, Verdict
from .combinat import c_exact, harmonic, q_exact, s_exact
from .exactlog import (
    Comparison,
    DomainError,
    Interval,
    LogForm,
    e_interval,
    lf_compare,
    lf_eval,
    lf_from_log_rational,
    lf_sum,
    log_factorial,
    pi_interval,
)

DEFAULT_EPSILON = Fraction(1, 12)
BRACKET_BITS = 64

LOG = lf_from_log_rational
LOG_2PI = LogForm.log_2pi()
HALF = Fraction(1, 2)
# -1 + (1/2) log(2 pi), the constant term of Stirling's formula shifted by -1
STIRLING = LogForm.rational(-1) + HALF * LOG_2PI


def _check_eps(eps) -> Fraction:
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 6):
        raise DomainError("epsilon must lie strictly between 0 and 1/6")
    return eps


# ---------------------------------------------------------------------------
# exact brackets


def floor_sqrt(D: int) -> int:
    """``[sqrt D]``, computed with integer arithmetic."""
    return math.isqrt(D)


def floor_power(D: int, expo: Fraction) -> int:
    """Largest integer ``<= D**expo`` for a non-negative rational exponent."""
    a, b = expo.numerator, expo.denominator
    root, _ = gmpy2.iroot(gmpy2.mpz(D) ** a, b)
    return int(root)


def strict_ceil_power(D: int, expo: Fraction) -> int:
    """``[D**expo]_+``: the smallest integer strictly larger than ``D**expo``."""
    return floor_power(D, expo) + 1


def power_upper(D: int, expo: Fraction, bits: int = BRACKET_BITS) -> Fraction:
    """Rational ``>= D**expo`` within ``2**-bits``."""
    a, b = expo.numerator, expo.denominator
    if a < 0:
        raise DomainError("negative exponent")
    root, exact = gmpy2.iroot(gmpy2.mpz(D) ** a << (b * bits), b)
    return Fraction(int(root) + (0 if exact else 1), 1 << bits)


def sqrt_upper(D: int, bits: int = BRACKET_BITS) -> Fraction:
    return power_upper(D, HALF, bits)


def upper_rational(iv: Interval, bits: int = BRACKET_BITS) -> Fraction:
    return Fraction(math.ceil(iv.hi_fraction * (1 << bits)), 1 << bits)


def lower_rational(iv: Interval, bits: int = BRACKET_BITS) -> Fraction:
    return Fraction(math.floor(iv.lo_fraction * (1 << bits)), 1 << bits)


@lru_cache(maxsize=None)
def _e_over_pi_sqrt_upper(n: int) -> Fraction:
    iv = e_interval(192) / (pi_interval(192) * Interval.exact(n, 192).sqrt())
    return upper_rational(iv)


@lru_cache(maxsize=None)
def _pi_sq_over_6_upper() -> Fraction:
    p = pi_interval(192)
    return upper_rational(p * p / 6)


# ---------------------------------------------------------------------------
# A1 / A1'


def _log_half_shift(D: int) -> LogForm:
    """``log(D + 1/2)``."""
    return LOG(Fraction(2 * D + 1, 2))


def _logD(D: int) -> LogForm:
    return LOG(D) if D >= 1 else LogForm.zero()


_A1_CONST = Fraction(3, 2) * LOG(Fraction(3, 2)) + HALF - HALF * LOG_2PI


def a1_lower(n: int, D: int) -> LogForm:
    x = Fraction(2 * D + 1, 2)
    return -(2 ** (n + 3)) * x ** (n - 1) * _log_half_shift(D) - _A1_CONST


def a1_upper(n: int, D: int, eps=DEFAULT_EPSILON) -> LogForm:
    eps = _check_eps(eps)
    x = Fraction(2 * D + 1, 2)
    out = 9 * n * (n - 1) * x ** (n - 1) * _log_half_shift(D)
    if n >= 2 and D >= 2:
        coeff = (n - 1) * 2**n * _e_over_pi_sqrt_upper(n)
        out = out + coeff * power_upper(D, n - HALF + 3 * eps) * _logD(D)
    return out


# ---------------------------------------------------------------------------
# A2 / A2'


def _a2_common(n: int, D: int) -> LogForm:
    f1 = math.factorial(n - 1)
    return (
        -Fraction((n + 1) * D ** (n - 1), 4 * f1) * _logD(D)
        + Fraction((n + 1) * D ** (n - 1), 2 * f1) * (STIRLING - Fraction(1, 2 * n))
    )


def a2_lower(n: int, D: int) -> LogForm:
    if n < 2:
        raise DomainError("A2 needs n >= 2")
    f1 = math.factorial(n - 1)
    return (
        a1_lower(n, D) / math.factorial(n)
        + _a2_common(n, D)
        + Fraction(n + 1, 2 * f1) * a1_lower(n - 1, D)
        - (n - 1) ** 2 * (D - 1) ** (n - 1) * _logD(D)
    )


def a2_upper(n: int, D: int, eps=DEFAULT_EPSILON) -> LogForm:
    if n < 2:
        raise DomainError("A2 needs n >= 2")
    f1 = math.factorial(n - 1)
    return (
        a1_upper(n, D, eps) / math.factorial(n)
        + _a2_common(n, D)
        + Fraction(n + 1, 2 * f1) * a1_upper(n - 1, D, eps)
        + (n - 1) ** 2 * (D - 1) ** (n - 1) * _logD(D)
    )


# ---------------------------------------------------------------------------
# a3, A3 / A3'


def a3(D: int) -> LogForm:
    """Closed-form remainder of the explicit Q(1, D) computation.

    It is the full explicit expression (integrals of ``x log x`` and
    ``log x`` plus the Stirling constant) minus its three dominant terms
    ``D**2 / 2 - D log(D) / 2 - (-1 + log(2 pi) / 2) D``.
    """
    x = Fraction(2 * D + 1, 2)
    L = _log_half_shift(D)
    full = (
        x * x * L
        - Fraction(9, 4) * LOG(Fraction(3, 2))
        - HALF * x * x
        + HALF * Fraction(9, 4)
        - (D + 1) * (x * L - x + 1)
        - (D + 1) * STIRLING
    )
    dominant = LogForm.rational(Fraction(D * D, 2)) - HALF * D * _logD(D) - D * STIRLING
    return full - dominant


def _a3_shared(D: int) -> LogForm:
    s = floor_sqrt(D)
    eighth = Fraction(1, 8)
    return (
        a3(D)
        + eighth * (LOG(Fraction(3, 2)) + 1)
        - eighth * (_log_half_shift(s) + 1)
        + eighth * (_log_half_shift(s) + 1)
        - eighth * (_log_half_shift(D) + 1)
    )


def a3_lower(D: int) -> LogForm:
    return _a3_shared(D)


def a3_upper(D: int) -> LogForm:
    root = sqrt_upper(D)
    return _a3_shared(D) + Fraction(2, 3) * root + root + Fraction(1, 4) + _pi_sq_over_6_upper()


# ---------------------------------------------------------------------------
# A4 / A4' by recursion on n


class _A4Table:
    """Memoised values and prefix sums of A4(n, .) and A4'(n, .)."""

    def __init__(self):
        self.lock = threading.Lock()
        self.vals: dict[tuple, list] = {}
        self.prefix: dict[tuple, list] = {}

    def ensure(self, n: int, D: int, eps: Fraction):
        key = (n, eps)
        have = self.vals.get(key)
        if have is not None and len(have) > D:
            return
        if n > 1:
            self.ensure(n - 1, D, eps)
        with self.lock:
            vals = self.vals.setdefault(key, [None])
            pre = self.prefix.setdefault(key, [(LogForm.zero(), LogForm.zero())])
            for m in range(len(vals), D + 1):
                if n == 1:
                    v = -a3_lower(m)
                    pair = (v, v)
                else:
                    plo, phi = self.prefix[(n - 1, eps)][m]
                    pair = (plo - a2_upper(n, m, eps), phi - a2_lower(n, m))
                vals.append(pair)
                pre.append((pre[-1][0] + pair[0], pre[-1][1] + pair[1]))

    def get(self, n: int, D: int, eps: Fraction):
        self.ensure(n, D, eps)
        return self.vals[(n, eps)][D]


_A4 = _A4Table()


def a4_pair(n: int, D: int, eps=DEFAULT_EPSILON) -> tuple[LogForm, LogForm]:
    """``(A4(n, D), A4'(n, D))``; ``A4(1, D) = A4'(1, D) = -A3(D)``."""
    if n < 1 or D < 1:
        raise DomainError("A4 needs n >= 1 and D >= 1")
    return _A4.get(n, D, _check_eps(eps))


def remainder_pair(kind: str, n: int, D: int, eps=DEFAULT_EPSILON) -> tuple[LogForm, LogForm]:
    kind = kind.upper()
    if D < 2:
        raise DomainError("remainders are defined for D >= 2")
    if kind == "A1":
        if n < 1:
            raise DomainError("A1 needs n >= 1")
        return a1_lower(n, D), a1_upper(n, D, eps)
    if kind == "A2":
        return a2_lower(n, D), a2_upper(n, D, eps)
    if kind == "A3":
        return a3_lower(D), a3_upper(D)
    if kind == "A4":
        return a4_pair(n, D, eps)
    raise DomainError(f"unknown remainder kind {kind!r}")


# ---------------------------------------------------------------------------
# dominant terms


def c_coefficient_poly(n: int) -> LogForm:
    """``P(n) H_n + Q(n)``, the bracket multiplying ``D**n / n!`` in the C estimate."""
    p = -Fraction(n**3, 6) - Fraction(3 * n * n, 4) - Fraction(13 * n, 12) + 2
    q = (
        Fraction(n**3, 4)
        + Fraction(17 * n * n, 24)
        + (Fraction(119, 72) - HALF * LOG_2PI) * n
        - 4
        + LOG_2PI
    )
    return p * harmonic(n) + q


def s_dominant(n: int, D: int) -> LogForm:
    return (
        harmonic(n) * Fraction(D ** (n + 1), n + 1)
        - Fraction(D**n, 2) * _logD(D)
        + D**n * (STIRLING - Fraction(1, 2 * n))
    )


def q_dominant(n: int, D: int) -> LogForm:
    fn = math.factorial(n)
    return (
        harmonic(n) * Fraction(D ** (n + 1), math.factorial(n + 1))
        - Fraction(D**n, 2 * fn) * _logD(D)
        + Fraction(D**n, fn) * (STIRLING - Fraction(1, 2 * n) + Fraction(n + 1, 2) * harmonic(n - 1))
    )


def c1_dominant(D: int) -> LogForm:
    return -Fraction(D * D, 2) + HALF * D * _logD(D) + D * STIRLING


def c_dominant(n: int, D: int) -> LogForm:
    fn = math.factorial(n)
    return (
        (1 - harmonic(n + 1)) / fn * D ** (n + 1)
        - Fraction(n - 2, 2 * fn) * D**n * _logD(D)
        + Fraction(D**n, fn) * c_coefficient_poly(n)
    )


# ---------------------------------------------------------------------------
# envelopes


class EnvelopeVerdict(enum.Enum):
    CERTIFIED = "Certified"
    OUT_OF_VALIDATED_RANGE = "OutOfValidatedRange"


@dataclass
class Envelope:
    lower: LogForm
    upper: LogForm
    n: int
    D: int
    kind: str
    exact: LogForm
    verdict: EnvelopeVerdict = EnvelopeVerdict.CERTIFIED
    precision_bits: int = 256
    counterexample: dict = field(default_factory=dict)

    def contains(self, value: LogForm, precision_bits: int | None = None) -> bool:
        prec = precision_bits or self.precision_bits
        return _side_ok(self.lower, value, prec) and _side_ok(value, self.upper, prec)

    def midpoint(self) -> float:
        return (float(self.lower) + float(self.upper)) / 2

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "D": self.D,
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
            "exact": self.exact.to_json(),
            "verdict": self.verdict.value,
            "precision_bits": self.precision_bits,
            "counterexample": {k: v.to_json() for k, v in self.counterexample.items()},
        }


def _side_ok(a: LogForm, b: LogForm, prec: int) -> bool:
    return lf_compare(a, b, prec) in (Comparison.LESS, Comparison.EQUAL)


def _finish(kind, n, D, lower, upper, exact, prec) -> Envelope:
    env = Envelope(lower, upper, n, D, kind, exact, precision_bits=prec)
    bad = {}
    if not _side_ok(lower, exact, prec):
        bad["lower_minus_exact"] = lower - exact
    if not _side_ok(exact, upper, prec):
        bad["exact_minus_upper"] = exact - upper
    if bad:
        env.verdict = EnvelopeVerdict.OUT_OF_VALIDATED_RANGE
        env.counterexample = bad
    return env


def s_envelope(n: int, D: int, eps=DEFAULT_EPSILON, precision_bits: int = 256) -> Envelope:
    if n < 2 or D < 2:
        raise DomainError("S envelope needs n >= 2 and D >= 2")
    dom = s_dominant(n, D)
    lo, hi = remainder_pair("A1", n, D, eps)
    return _finish("S", n, D, dom + lo, dom + hi, s_exact(n, D), precision_bits)


def q_envelope(n: int, D: int, eps=DEFAULT_EPSILON, precision_bits: int = 256) -> Envelope:
    if n < 2 or D < 2:
        raise DomainError("Q envelope needs n >= 2 and D >= 2")
    dom = q_dominant(n, D)
    lo, hi = remainder_pair("A2", n, D, eps)
    return _finish("Q", n, D, dom + lo, dom + hi, q_exact(n, D), precision_bits)


def c_envelope(n: int, D: int, eps=DEFAULT_EPSILON, precision_bits: int = 256) -> Envelope:
    if n < 1 or D < 2:
        raise DomainError("C envelope needs n >= 1 and D >= 2")
    if n == 1:
        dom = c1_dominant(D)
        lo, hi = remainder_pair("A3", 1, D, eps)
        return _finish("C1", 1, D, dom + lo, dom + hi, c_exact(1, D), precision_bits)
    dom = c_dominant(n, D)
    lo, hi = remainder_pair("A4", n, D, eps)
    return _finish("C", n, D, dom + lo, dom + hi, c_exact(n, D), precision_bits)


ENVELOPES: dict[str, Callable] = {"S": s_envelope, "Q": q_envelope, "C": c_envelope, "C1": c_envelope}


# ---------------------------------------------------------------------------
# validity table


def scan_validity(kind: str, n: int, D_max: int = 60, eps=DEFAULT_EPSILON, precision_bits: int = 256):
    """Smallest ``D0`` such that the envelope holds for every ``D`` in ``[D0, D_max]``.

    Returns ``(row, failures)`` where ``failures`` lists the envelopes that
    did not contain the exact value.  ``D0 = D_max + 1`` means no suffix of
    the range is covered.
    """
    fn = ENVELOPES[kind]
    failures = []
    D0 = 2
    for D in range(2, D_max + 1):
        env = fn(n, D, eps, precision_bits)
        if env.verdict is not EnvelopeVerdict.CERTIFIED:
            failures.append(env)
            D0 = D + 1
    row = {"n": n, "kind": kind, "D0": D0, "checked_up_to": D_max, "precision_bits": precision_bits}
    return row, failures


def load_validity_table() -> list[dict]:
    text = resources.files("arith_hilbert").joinpath("data/validity_table.json").read_text()
    return json.loads(text)


def validated_D0(kind: str, n: int) -> int | None:
    for row in load_validity_table():
        if row["kind"] == kind and row["n"] == n:
            return row["D0"]
    return None


# ---------------------------------------------------------------------------
# B0(n)


def b0_closed_part(n: int) -> LogForm:
    """All terms of B0(n) except the infimum of the remainder quotient."""
    if n < 2:
        raise DomainError("B0 needs n >= 2")
    Hn1 = harmonic(n + 1)
    return (
        Fraction(1, 2 * math.factorial(n))
        - HALF * LOG(n + 1)
        + Fraction(2 ** (n - 1) * (n + 1), n) * (1 - Hn1)
        - Fraction(2 ** (n - 2) * (n - 2), n)
        + Fraction(2 ** (n - 2), n) * c_coefficient_poly(n)
    )


@dataclass
class B0Result:
    n: int
    value_lower: Interval
    search_D_max: int
    search_delta_max: int
    tail_bound: Interval
    closed_part: LogForm
    grid_inf: Interval
    grid_argmin: tuple
    per_delta_inf: dict
    epsilon: Fraction
    precision_bits: int
    notes: str = ""

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "value_lower": self.value_lower.to_json(),
            "search_D_max": self.search_D_max,
            "search_delta_max": self.search_delta_max,
            "tail_bound": self.tail_bound.to_json(),
            "closed_part": self.closed_part.to_json(),
            "grid_inf": self.grid_inf.to_json(),
            "grid_argmin": list(self.grid_argmin),
            "per_delta_inf": {str(k): v.to_json() for k, v in self.per_delta_inf.items()},
            "epsilon": str(self.epsilon),
            "precision_bits": self.precision_bits,
            "notes": self.notes,
        }


class _Majorant:
    """``sum_a coef[a] * (D+1)**a * log(D+1)``, an upper bound valid for all ``D >= 1``."""

    LOG2_LOWER = Fraction(693147, 1000000)  # < log 2

    def __init__(self, coef=None):
        self.coef: dict[Fraction, Fraction] = dict(coef or {})

    def add(self, a, c):
        a = Fraction(a)
        if c:
            self.coef[a] = self.coef.get(a, Fraction(0)) + Fraction(c)
        return self

    def add_const(self, c):
        # c <= (c / log 2) * log(D+1)
        return self.add(0, abs(Fraction(c)) / self.LOG2_LOWER)

    def add_poly(self, a, c):
        # c * D**a <= (c / log 2) (D+1)**a log(D+1)
        return self.add(a, abs(Fraction(c)) / self.LOG2_LOWER)

    def __add__(self, other):
        out = _Majorant(self.coef)
        for a, c in other.coef.items():
            out.add(a, c)
        return out

    def scaled(self, k):
        return _Majorant({a: c * abs(Fraction(k)) for a, c in self.coef.items()})

    def summed(self):
        # sum_{m=1}^{D} (m+1)**a log(m+1) <= D (D+1)**a log(D+1) <= (D+1)**(a+1) log(D+1)
        return _Majorant({a + 1: c for a, c in self.coef.items()})


def _abs_bound(form: LogForm) -> Fraction:
    return max(abs(upper_rational(lf_eval(form, 128))), abs(lower_rational(lf_eval(form, 128))))


def _a1_lower_major(n: int) -> _Majorant:
    # |A1(n,D)| <= 2^{n+3} (D+1/2)^{n-1} log(D+1/2) + |K|
    m = _Majorant().add(n - 1, 2 ** (n + 3))
    return m.add_const(_abs_bound(_A1_CONST))


def _a1_upper_major(n: int, eps: Fraction) -> _Majorant:
    m = _Majorant().add(n - 1, 9 * n * (n - 1))
    if n >= 2:
        m.add(n - HALF + 3 * eps, (n - 1) * 2**n * _e_over_pi_sqrt_upper(n))
    return m


def _a2_major(n: int, eps: Fraction, upper: bool) -> _Majorant:
    f1 = math.factorial(n - 1)
    a1 = _a1_upper_major(n, eps) if upper else _a1_lower_major(n)
    a1m = _a1_upper_major(n - 1, eps) if upper else _a1_lower_major(n - 1)
    stir = _abs_bound(STIRLING - Fraction(1, 2 * n))
    m = a1.scaled(Fraction(1, math.factorial(n)))
    m = m + a1m.scaled(Fraction(n + 1, 2 * f1))
    m.add(n - 1, Fraction(n + 1, 4 * f1))
    m.add_poly(n - 1, Fraction(n + 1, 2 * f1) * stir)
    m.add(n - 1, (n - 1) ** 2)
    return m


def _a3_major() -> _Majorant:
    # A3(D) = k0 + (1/2)(D log D - (D+1/2) log(D+1/2)) - (1/8) log(D+1/2) with
    # |D log D - (D+1/2) log(D+1/2)| <= (log(D+1/2) + 1) / 2
    k0 = Fraction(3, 2) - HALF * LOG_2PI - Fraction(9, 4) * LOG(Fraction(3, 2)) + Fraction(1, 8) * LOG(
        Fraction(3, 2)
    )
    m = _Majorant().add_const(_abs_bound(k0) + Fraction(1, 4))
    return m.add(0, Fraction(1, 4) + Fraction(1, 8))


def a4_majorant(n: int, eps: Fraction) -> _Majorant:
    """Majorant of ``max(|A4(n, D)|, |A4'(n, D)|)`` for ``D >= 1``."""
    if n == 1:
        return _a3_major()
    prev = a4_majorant(n - 1, eps).summed()
    return prev + _a2_major(n, eps, True) + _a2_major(n, eps, False)


def _sup_ratio(a: Fraction, n: int, D0: int, prec: int) -> Interval:
    """Upper bound of ``(D+1)**a log(D+1) / D**n`` over integers ``D >= D0``."""
    s = n - a
    if s <= 0:
        raise NotCertified("remainder majorant does not decay")
    x0 = D0 + 1
    iv_s = Interval.exact(s, prec)
    peak = (1 / iv_s).exp()
    if peak.certainly_le(x0):
        core = Interval.exact(x0, prec).log() / (Interval.exact(x0, prec).log() * iv_s).exp()
    else:
        core = 1 / (e_interval(prec) * iv_s)
    grow = Interval.exact(Fraction(D0 + 1, D0) ** n, prec)
    return Interval(core._hi, core._hi, prec) * grow


def b0_tail(n: int, D_max: int, delta_max: int, eps=DEFAULT_EPSILON, prec: int = 128) -> Interval:
    """Lower bound of the remainder quotient outside the searched grid.

    Outside the grid either ``delta <= delta_max`` and ``D > D_max``, or
    ``delta > delta_max`` and ``D >= delta + 1 >= delta_max + 2``.  In both
    cases the quotient is at least ``-2 M(D) / (2**(n-1) delta D**n)`` with
    ``M`` the A4 majorant, which is increasing in ``D``.
    """
    eps = _check_eps(eps)
    maj = a4_majorant(n, eps)

    def bound(D0: int, delta_floor: int) -> Interval:
        tot = Interval.exact(0, prec)
        for a, c in maj.coef.items():
            tot = tot + Interval.exact(2 * c, prec) * _sup_ratio(a, n, D0, prec)
        return -(tot / (2 ** (n - 1) * delta_floor))

    r1 = bound(D_max + 1, 1)
    r2 = bound(delta_max + 2, delta_max + 1)
    return r1 if r1.lo <= r2.lo else r2


def b0_lower(
    n: int,
    D_max: int = 128,
    delta_max: int = 32,
    precision_bits: int = 128,
    eps=DEFAULT_EPSILON,
) -> B0Result:
    """Certified lower bound for B0(n).

    The infimum over ``D >= delta + 1`` and ``delta >= 1`` of the remainder
    quotient is taken jointly; the per-delta minima are reported as well.
    """
    if n < 2:
        raise DomainError("B0 needs n >= 2")
    if D_max < 1 or delta_max < 1:
        raise DomainError("search bounds must be positive")
    eps = _check_eps(eps)
    prec = precision_bits
    closed = b0_closed_part(n)
    closed_iv = lf_eval(closed, prec)

    lo_iv = [None] + [lf_eval(a4_pair(n, D, eps)[0], prec) for D in range(1, D_max + 1)]
    hi_iv = [None] + [lf_eval(a4_pair(n, D, eps)[1], prec) for D in range(1, D_max + 1)]
    grid_inf = None
    argmin = ()
    per_delta = {}
    for delta in range(1, delta_max + 1):
        best = None
        for D in range(delta + 1, D_max + 1):
            q = (lo_iv[D] - hi_iv[D - delta]) / (2 ** (n - 1) * delta * D**n)
            if best is None or q.lo < best.lo:
                best = q
                if grid_inf is None or q.lo < grid_inf.lo:
                    grid_inf, argmin = q, (delta, D)
        if best is not None:
            per_delta[delta] = best
    tail = b0_tail(n, D_max, delta_max, eps, prec)
    inf_lo = tail if grid_inf is None or tail.lo <= grid_inf.lo else grid_inf
    total = closed_iv + inf_lo
    value = Interval(total._lo, total._lo, prec)
    notes = (
        "infimum taken jointly over delta >= 1 and D >= delta + 1; "
        "per_delta_inf lists the grid minimum for each delta separately"
    )
    if grid_inf is None:
        grid_inf = tail
    return B0Result(
        n=n,
        value_lower=value,
        search_D_max=D_max,
        search_delta_max=delta_max,
        tail_bound=tail,
        closed_part=closed,
        grid_inf=grid_inf,
        grid_argmin=argmin,
        per_delta_inf=per_delta,
        epsilon=eps,
        precision_bits=prec,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# Euler-Maclaurin midpoint certificate


@dataclass(frozen=True)
class EMFunction:
    """A test function with exact sums, antiderivative, derivative and ``sup|f''|``."""

    name: str
    partial_sum: Callable[[int, int], LogForm]
    antiderivative: Callable[[Fraction], LogForm]
    derivative: Callable[[Fraction], LogForm]
    sup_second: Callable[[Fraction, Fraction], Fraction]


def _log_antider(x: Fraction) -> LogForm:
    return x * LOG(x) - x


def _xlog_partial(p: int, q: int) -> LogForm:
    return lf_sum(m * LOG(m) for m in range(max(p, 2), q + 1))


def _xlog_antider(x: Fraction) -> LogForm:
    return x * x / 2 * LOG(x) - x * x / 4


EM_FUNCTIONS = {
    "log": EMFunction(
        "log",
        lambda p, q: log_factorial(q) - log_factorial(p - 1),
        _log_antider,
        lambda x: LogForm.rational(1 / x),
        lambda a, b: 1 / (a * a),
    ),
    "xlog": EMFunction(
        "xlog",
        _xlog_partial,
        _xlog_antider,
        lambda x: LOG(x) + 1,
        lambda a, b: 1 / a,
    ),
}


def euler_maclaurin_check(f_id, p: int, q: int, precision_bits: int = 256) -> BoundCertificate:
    """Certify ``|Theta| <= (q - p + 1) sup |f''|`` for the midpoint Euler-Maclaurin formula.

    ``f_id`` is ``"log"``, ``"xlog"`` or an :class:`EMFunction`.
    """
    if isinstance(f_id, EMFunction):
        f = f_id
    elif f_id in EM_FUNCTIONS:
        f = EM_FUNCTIONS[f_id]
    else:
        raise DomainError(f"unsupported function {f_id!r}")
    if not 1 <= p <= q:
        raise DomainError("need 1 <= p <= q")
    a = Fraction(2 * p - 1, 2)
    b = Fraction(2 * q + 1, 2)
    theta = (
        f.partial_sum(p, q)
        - (f.antiderivative(b) - f.antiderivative(a))
        - Fraction(1, 8) * f.derivative(a)
        + Fraction(1, 8) * f.derivative(b)
    )
    bound = (q - p + 1) * f.sup_second(a, b)
    t = lf_eval(theta, precision_bits)
    ok = t.certainly_le(bound) and t.certainly_ge(-bound)
    verdict = Verdict.PASS if ok else Verdict.FAIL
    return BoundCertificate(
        "Euler-Maclaurin midpoint remainder",
        lhs=theta,
        rhs=LogForm.rational(bound),
        verdict=verdict,
        relation="|lhs| <=",
        witnesses={"f": f.name, "p": p, "q": q, "theta_interval": t},
    )


VALIDITY_GRID = (("C1", 1), ("S", 2), ("S", 3), ("S", 4), ("Q", 2), ("Q", 3), ("Q", 4), ("C", 2), ("C", 3), ("C", 4))


def build_validity_table(D_max: int = 60, precision_bits: int = 256, eps=DEFAULT_EPSILON):
    """Rows for every (kind, n) of the validated grid plus all failing envelopes."""
    rows, failures = [], []
    for kind, n in VALIDITY_GRID:
        row, bad = scan_validity(kind, n, D_max, eps, precision_bits)
        rows.append(row)
        failures.extend(bad)
    return rows, failures


def envelope_counterexample(env: Envelope) -> BoundCertificate:
    """Certificate recording why an envelope does not contain the exact value."""
    if "exact_minus_upper" in env.counterexample:
        lhs, rhs = env.exact, env.upper
    else:
        lhs, rhs = env.lower, env.exact
    d = lf_eval(rhs - lhs, env.precision_bits)
    return BoundCertificate(
        f"{env.kind} envelope, n={env.n}, D={env.D}",
        lhs=lhs,
        rhs=rhs,
        verdict=Verdict.FAIL if d.certainly_lt(0) else Verdict.NOT_CERTIFIED,
        witnesses={"n": env.n, "D": env.D, "kind": env.kind, "rhs_minus_lhs": d},
    )
