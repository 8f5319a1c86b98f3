"""Exact real numbers of the form ``q0 + sum_p c_p log p + c_pi log(pi)``.

Every closed-form constant handled by this package (combinatorial sums of
log-factorials, remainder constants, heights, Bombieri log-norms) is a
rational combination of ``1``, ``log p`` for primes ``p`` and ``log(pi)``.
:class:`LogForm` stores such a number canonically, so structural equality is
semantic equality, and :class:`Interval` gives certified enclosures of it.

Equality testing relies on the linear independence over Q of
``{1, log 2, log 3, log 5, ..., log(pi)}``.  For ``1`` and the prime logs this
is a theorem (unique factorisation plus Lindemann); the ``log(pi)`` part is a
standing hypothesis.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping

from mpmath import mpf
from mpmath.libmp import (
    from_int,
    from_rational,
    mpf_cmp,
    mpf_neg,
    mpf_sign,
    round_ceiling,
    round_floor,
    to_rational,
    to_str,
)
from mpmath.libmp import libmpi

__all__ = [
    "DEFAULT_PRECISION",
    "Comparison",
    "DomainError",
    "Interval",
    "LogForm",
    "factor_int",
    "lf_compare",
    "lf_eval",
    "lf_from_log_rational",
    "log_factorial",
    "log_int",
    "rational_above",
    "rational_below",
]

DEFAULT_PRECISION = 128
MIN_PRECISION = 16


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# Intervals


def _mpf_of(q: Fraction, prec: int, rnd) -> tuple:
    return from_rational(q.numerator, q.denominator, prec, rnd)


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with binary floating endpoints.

    Endpoints are raw mpmath mpf tuples; all arithmetic rounds outward, so
    any interval produced from exact inputs encloses the exact result.
    """

    _lo: tuple
    _hi: tuple
    prec: int = DEFAULT_PRECISION

    def __post_init__(self):
        if mpf_cmp(self._lo, self._hi) > 0:
            raise ValueError("interval with lo > hi")

    # -- construction -----------------------------------------------------
    @classmethod
    def exact(cls, x, prec: int = DEFAULT_PRECISION) -> "Interval":
        q = _as_fraction(x)
        return cls(_mpf_of(q, prec, round_floor), _mpf_of(q, prec, round_ceiling), prec)

    @classmethod
    def hull(cls, a, b, prec: int = DEFAULT_PRECISION) -> "Interval":
        """Smallest interval containing the two rationals ``a`` and ``b``."""
        lo, hi = sorted((_as_fraction(a), _as_fraction(b)))
        return cls(_mpf_of(lo, prec, round_floor), _mpf_of(hi, prec, round_ceiling), prec)

    @classmethod
    def _wrap(cls, mpi, prec) -> "Interval":
        return cls(mpi[0], mpi[1], prec)

    @property
    def _mpi(self):
        return (self._lo, self._hi)

    # -- accessors ----------------------------------------------------------
    @property
    def lo(self) -> mpf:
        return mpf(self._lo)

    @property
    def hi(self) -> mpf:
        return mpf(self._hi)

    @property
    def lo_fraction(self) -> Fraction:
        p, q = to_rational(self._lo)
        return Fraction(p, q)

    @property
    def hi_fraction(self) -> Fraction:
        p, q = to_rational(self._hi)
        return Fraction(p, q)

    def width(self) -> mpf:
        return self.hi - self.lo

    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        return Interval.exact(other, self.prec)

    def __add__(self, other):
        o = self._coerce(other)
        p = max(self.prec, o.prec)
        return Interval._wrap(libmpi.mpi_add(self._mpi, o._mpi, p), p)

    __radd__ = __add__

    def __neg__(self):
        return Interval(mpf_neg(self._hi), mpf_neg(self._lo), self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        p = max(self.prec, o.prec)
        return Interval._wrap(libmpi.mpi_sub(self._mpi, o._mpi, p), p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        p = max(self.prec, o.prec)
        return Interval._wrap(libmpi.mpi_mul(self._mpi, o._mpi, p), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.contains(0):
            raise ZeroDivisionError("interval division by an interval containing 0")
        p = max(self.prec, o.prec)
        return Interval._wrap(libmpi.mpi_div(self._mpi, o._mpi, p), p)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def exp(self) -> "Interval":
        return Interval._wrap(libmpi.mpi_exp(self._mpi, self.prec), self.prec)

    def log(self) -> "Interval":
        if mpf_sign(self._lo) <= 0:
            raise DomainError("log of an interval not strictly positive")
        return Interval._wrap(libmpi.mpi_log(self._mpi, self.prec), self.prec)

    def sqrt(self) -> "Interval":
        if mpf_sign(self._lo) < 0:
            raise DomainError("sqrt of an interval with negative part")
        return Interval._wrap(libmpi.mpi_sqrt(self._mpi, self.prec), self.prec)

    def intersect(self, other: "Interval") -> "Interval":
        lo = self._lo if mpf_cmp(self._lo, other._lo) >= 0 else other._lo
        hi = self._hi if mpf_cmp(self._hi, other._hi) <= 0 else other._hi
        if mpf_cmp(lo, hi) > 0:
            raise ValueError("disjoint intervals; at least one enclosure is wrong")
        return Interval(lo, hi, max(self.prec, other.prec))

    def union(self, other: "Interval") -> "Interval":
        lo = self._lo if mpf_cmp(self._lo, other._lo) <= 0 else other._lo
        hi = self._hi if mpf_cmp(self._hi, other._hi) >= 0 else other._hi
        return Interval(lo, hi, max(self.prec, other.prec))

    # -- predicates ---------------------------------------------------------
    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return mpf_cmp(self._lo, x._lo) <= 0 and mpf_cmp(x._hi, self._hi) <= 0
        q = _as_fraction(x)
        return self.lo_fraction <= q <= self.hi_fraction

    def certainly_lt(self, other) -> bool:
        o = self._coerce(other)
        return mpf_cmp(self._hi, o._lo) < 0

    def certainly_le(self, other) -> bool:
        o = self._coerce(other)
        return mpf_cmp(self._hi, o._lo) <= 0

    def certainly_gt(self, other) -> bool:
        return self._coerce(other).certainly_lt(self)

    def certainly_ge(self, other) -> bool:
        return self._coerce(other).certainly_le(self)

    def to_json(self) -> dict:
        return {"lo": to_str(self._lo, 40), "hi": to_str(self._hi, 40), "prec": self.prec}

    def __repr__(self):
        return f"Interval([{to_str(self._lo, 20)}, {to_str(self._hi, 20)}])"


def rational_above(iv: Interval) -> Fraction:
    """Exact rational upper bound for every point of ``iv``."""
    return iv.hi_fraction


def rational_below(iv: Interval) -> Fraction:
    return iv.lo_fraction


@lru_cache(maxsize=4096)
def _log_prime_iv(p: int, prec: int) -> Interval:
    x = from_int(p)
    return Interval._wrap(libmpi.mpi_log((x, x), prec + 10), prec + 10)


@lru_cache(maxsize=64)
def _log_pi_iv(prec: int) -> Interval:
    pi = libmpi.mpi_pi(prec + 10)
    return Interval._wrap(libmpi.mpi_log(pi, prec + 10), prec + 10)


def pi_interval(prec: int = DEFAULT_PRECISION) -> Interval:
    return Interval._wrap(libmpi.mpi_pi(prec), prec)


def e_interval(prec: int = DEFAULT_PRECISION) -> Interval:
    one = from_int(1)
    return Interval._wrap(libmpi.mpi_exp((one, one), prec), prec)


# ---------------------------------------------------------------------------
# Prime factorisation helpers

_SIEVE_LOCK = threading.Lock()
_spf: list[int] = [0, 1]


def _ensure_sieve(n: int) -> None:
    global _spf
    if n < len(_spf):
        return
    with _SIEVE_LOCK:
        if n < len(_spf):
            return
        size = max(n + 1, 2 * len(_spf), 1 << 12)
        spf = list(range(size))
        i = 2
        while i * i < size:
            if spf[i] == i:
                for j in range(i * i, size, i):
                    if spf[j] == j:
                        spf[j] = i
            i += 1
        _spf = spf


_SIEVE_LIMIT = 1 << 22


@lru_cache(maxsize=1 << 16)
def factor_int(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of a positive integer as sorted ``(p, e)`` pairs."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    if n <= _SIEVE_LIMIT:
        _ensure_sieve(n)
        out: dict[int, int] = {}
        while n > 1:
            p = _spf[n]
            out[p] = out.get(p, 0) + 1
            n //= p
        return tuple(sorted(out.items()))
    from sympy import factorint

    return tuple(sorted(factorint(n).items()))


def smallest_prime_factors(n: int) -> list[int]:
    """Sieve table ``spf`` with ``spf[j]`` the least prime factor of ``j`` for ``2 <= j <= n``."""
    _ensure_sieve(n)
    return _spf


def primes_up_to(n: int) -> list[int]:
    _ensure_sieve(n)
    return [p for p in range(2, n + 1) if _spf[p] == p]


# ---------------------------------------------------------------------------
# LogForm


class Comparison(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"
    UNDECIDED = "Undecided"


class LogForm:
    """``const + sum_p logs[p] * log(p) + pi * log(pi)`` with rational coefficients.

    Instances are immutable and canonical: zero coefficients are dropped and
    every key of ``logs`` is prime.
    """

    __slots__ = ("_const", "_logs", "_pi", "_hash")

    def __init__(self, const=0, logs: Mapping[int, object] | None = None, pi=0):
        clean: dict[int, Fraction] = {}
        for p, c in (logs or {}).items():
            p = int(p)
            c = _as_fraction(c)
            if c == 0:
                continue
            f = factor_int(p) if p >= 2 else ()
            if len(f) != 1 or f[0][1] != 1:
                raise DomainError(f"log key {p} is not prime")
            clean[p] = c
        self._set(_as_fraction(const), clean, _as_fraction(pi))

    def _set(self, const, logs, pi):
        object.__setattr__(self, "_const", const)
        object.__setattr__(self, "_logs", tuple(sorted(logs.items())))
        object.__setattr__(self, "_pi", pi)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, const: Fraction, logs: Mapping[int, Fraction], pi: Fraction) -> "LogForm":
        obj = cls.__new__(cls)
        obj._set(const, {p: c for p, c in logs.items() if c != 0}, pi)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("LogForm is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls) -> "LogForm":
        return _ZERO

    @classmethod
    def rational(cls, q) -> "LogForm":
        return cls._raw(_as_fraction(q), {}, Fraction(0))

    @classmethod
    def log(cls, x) -> "LogForm":
        return lf_from_log_rational(x)

    @classmethod
    def log_pi(cls) -> "LogForm":
        return cls._raw(Fraction(0), {}, Fraction(1))

    @classmethod
    def log_2pi(cls) -> "LogForm":
        return cls._raw(Fraction(0), {2: Fraction(1)}, Fraction(1))

    # -- fields -------------------------------------------------------------
    @property
    def const_part(self) -> Fraction:
        return self._const

    @property
    def log_coeffs(self) -> dict[int, Fraction]:
        return dict(self._logs)

    @property
    def pi_coeff(self) -> Fraction:
        return self._pi

    def is_zero(self) -> bool:
        return self._const == 0 and not self._logs and self._pi == 0

    def is_rational(self) -> bool:
        return not self._logs and self._pi == 0

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LogForm):
            try:
                other = LogForm.rational(other)
            except TypeError:
                return NotImplemented
        logs = dict(self._logs)
        for p, c in other._logs:
            logs[p] = logs.get(p, 0) + c
        return LogForm._raw(self._const + other._const, logs, self._pi + other._pi)

    __radd__ = __add__

    def __neg__(self):
        return LogForm._raw(-self._const, {p: -c for p, c in self._logs}, -self._pi)

    def __sub__(self, other):
        if not isinstance(other, LogForm):
            try:
                other = LogForm.rational(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        if isinstance(k, LogForm):
            if k.is_rational():
                k = k._const
            elif self.is_rational():
                return k * self._const
            else:
                raise TypeError("product of two transcendental LogForms is not a LogForm")
        try:
            k = _as_fraction(k)
        except TypeError:
            return NotImplemented
        if k == 0:
            return _ZERO
        return LogForm._raw(self._const * k, {p: c * k for p, c in self._logs}, self._pi * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        k = _as_fraction(k)
        if k == 0:
            raise ZeroDivisionError("LogForm division by zero")
        return self * (1 / k)

    # -- comparison / hashing ----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LogForm):
            return (self._const, self._logs, self._pi) == (other._const, other._logs, other._pi)
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self._const == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self._const, self._logs, self._pi))
            object.__setattr__(self, "_hash", h)
        return h

    # -- evaluation ---------------------------------------------------------
    def interval(self, prec: int = DEFAULT_PRECISION) -> Interval:
        return lf_eval(self, prec)

    def __float__(self):
        return lf_eval(self, 64).mid()

    # -- serialisation ------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "const": str(self._const),
            "logs": {str(p): str(c) for p, c in self._logs},
            "pi": str(self._pi),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "LogForm":
        return cls(
            Fraction(obj.get("const", "0")),
            {int(p): Fraction(c) for p, c in obj.get("logs", {}).items()},
            Fraction(obj.get("pi", "0")),
        )

    def __str__(self):
        parts = []
        if self._const != 0:
            parts.append(str(self._const))
        for p, c in self._logs:
            parts.append(f"{c} * log({p})")
        if self._pi != 0:
            parts.append(f"{self._pi} * log(pi)")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"LogForm({self})"


_ZERO = LogForm._raw(Fraction(0), {}, Fraction(0))


def lf_sum(forms: Iterable[LogForm]) -> LogForm:
    """Sum of many LogForms without quadratic dict copying."""
    const = Fraction(0)
    pi = Fraction(0)
    logs: dict[int, Fraction] = {}
    for f in forms:
        const += f._const
        pi += f._pi
        for p, c in f._logs:
            logs[p] = logs.get(p, 0) + c
    return LogForm._raw(const, logs, pi)


@lru_cache(maxsize=1 << 16)
def log_int(m: int) -> LogForm:
    """``log m`` for a positive integer, decomposed into prime logs."""
    if m < 1:
        raise DomainError(f"log of non-positive integer {m}")
    return LogForm._raw(Fraction(0), {p: Fraction(e) for p, e in factor_int(m)}, Fraction(0))


def lf_from_log_rational(x) -> LogForm:
    """Exact ``log x`` of a positive rational as a LogForm."""
    q = _as_fraction(x)
    if q <= 0:
        raise DomainError(f"log of non-positive rational {q}")
    logs: dict[int, Fraction] = {}
    if q.numerator > 1:
        for p, e in factor_int(q.numerator):
            logs[p] = Fraction(e)
    if q.denominator > 1:
        for p, e in factor_int(q.denominator):
            logs[p] = logs.get(p, 0) - e
    return LogForm._raw(Fraction(0), logs, Fraction(0))


def _legendre(k: int, p: int) -> int:
    e, pk = 0, p
    while pk <= k:
        e += k // pk
        pk *= p
    return e


_LOGFACT_LOCK = threading.Lock()
_logfact: dict[int, LogForm] = {}


def log_factorial(k: int) -> LogForm:
    """``log k!`` via Legendre's formula; memoised per ``k``."""
    if k < 0:
        raise DomainError("negative factorial")
    got = _logfact.get(k)
    if got is not None:
        return got
    val = LogForm._raw(
        Fraction(0), {p: Fraction(_legendre(k, p)) for p in primes_up_to(k)}, Fraction(0)
    )
    with _LOGFACT_LOCK:
        _logfact.setdefault(k, val)
    return val


def _raw_eval(form: LogForm, prec: int) -> Interval:
    work = prec + 10
    acc = Interval.exact(form._const, work)
    for p, c in form._logs:
        acc = acc + _log_prime_iv(p, prec) * Interval.exact(c, work)
    if form._pi != 0:
        acc = acc + _log_pi_iv(prec) * Interval.exact(form._pi, work)
    return Interval(acc._lo, acc._hi, prec)


@lru_cache(maxsize=1 << 15)
def lf_eval(form: LogForm, precision_bits: int = DEFAULT_PRECISION) -> Interval:
    """Certified enclosure of ``form``.

    The result at precision ``p`` is intersected with the result at ``p // 2``,
    so doubling the precision never widens the enclosure.
    """
    if precision_bits < MIN_PRECISION:
        raise DomainError(f"precision must be >= {MIN_PRECISION} bits")
    out = _raw_eval(form, precision_bits)
    if precision_bits // 2 >= MIN_PRECISION:
        out = out.intersect(lf_eval(form, precision_bits // 2))
    return out


def lf_compare(a: LogForm, b: LogForm, max_precision_bits: int = 1024) -> Comparison:
    if a == b:
        return Comparison.EQUAL
    diff = a - b
    prec = min(64, max_precision_bits)
    while True:
        iv = lf_eval(diff, max(prec, MIN_PRECISION))
        if iv.certainly_gt(0):
            return Comparison.GREATER
        if iv.certainly_lt(0):
            return Comparison.LESS
        if prec >= max_precision_bits:
            return Comparison.UNDECIDED
        prec = min(2 * prec, max_precision_bits)
