"""Exact combinatorial constants: ranks, harmonic numbers, C(n,D), Q(n,D), S(n,D).

``C(n, D)`` is the sum of ``log(a_0! ... a_n! / D!)`` over all compositions
``a`` of ``D`` into ``n + 1`` non-negative parts.  Among all compositions the
part value ``k`` occurs ``(n+1) * binom(D-k+n-1, n-1)`` times; summing
``log k! = sum_{j<=k} log j`` by parts turns that into

    C(n, D) = (n+1) * sum_{j=2}^{D} binom(D-j+n, n) * log j - r(n, D) * log D!

which needs only ``D`` integer logs.  :func:`c_bruteforce` enumerates the
compositions and is the oracle for this closed form.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

from .exactlog import DomainError, LogForm, factor_int, lf_sum, log_factorial, smallest_prime_factors

BRUTEFORCE_CAP = 2_000_000


class CapExceeded(RuntimeError):
    """Brute-force enumeration would exceed the configured composition cap."""


class InternalInconsistencyError(AssertionError):
    """Two independent formulas for the same constant disagree."""


def rank_e(n: int, D: int) -> int:
    """Number of monomials of degree ``D`` in ``n + 1`` variables."""
    if n < 0 or D < 0:
        raise DomainError("rank_e needs n >= 0 and D >= 0")
    return comb(n + D, D)


def rank_fd(n: int, delta: int, D: int) -> int:
    """Rank of the quotient of degree-``D`` forms by multiples of a degree-``delta`` form."""
    if delta < 1 or D < delta:
        raise DomainError("rank_fd needs D >= delta >= 1")
    return rank_e(n, D) - rank_e(n, D - delta)


@lru_cache(maxsize=None)
def harmonic(n: int) -> Fraction:
    if n < 1:
        raise DomainError("harmonic number needs n >= 1")
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def _weighted_logs(weights: dict[int, int]) -> LogForm:
    """``sum_j weights[j] * log j`` accumulated on prime exponents."""
    acc: dict[int, int] = {}
    spf = smallest_prime_factors(max(weights, default=1))
    for j, w in weights.items():
        if w == 0:
            continue
        while j > 1:
            p = spf[j]
            acc[p] = acc.get(p, 0) + w
            j //= p
    return LogForm._raw(Fraction(0), {p: Fraction(c) for p, c in acc.items()}, Fraction(0))


# ---------------------------------------------------------------------------
# C(n, D)


def compositions(n: int, D: int):
    """All compositions of ``D`` into ``n + 1`` non-negative parts (stars and bars)."""
    if n == 0:
        yield (D,)
        return
    for bars in combinations(range(D + n), n):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(D + n - prev - 1)
        yield tuple(parts)


def c_bruteforce(n: int, D: int, cap: int = BRUTEFORCE_CAP) -> LogForm:
    """C(n, D) by enumerating every composition.

    Part-value counts are tallied during enumeration and ``log D!`` is built by
    factoring ``2, ..., D`` one at a time, so neither the multiplicity formula
    nor Legendre's formula is involved.
    """
    if n < 0 or D < 0:
        raise DomainError("c_bruteforce needs n >= 0 and D >= 0")
    r = rank_e(n, D)
    if r > cap:
        raise CapExceeded(f"r({n},{D}) = {r} exceeds cap {cap}")
    counts = [0] * (D + 1)
    for parts in compositions(n, D):
        for a in parts:
            counts[a] += 1
    # sum_k counts[k] log k!  =  sum_j log j * #{parts >= j}
    tail = 0
    weights: dict[int, int] = {}
    for j in range(D, 1, -1):
        tail += counts[j]
        weights[j] = tail
    return _weighted_logs(weights) - r * _log_factorial_by_factoring(D)


def _log_factorial_by_factoring(D: int) -> LogForm:
    acc: dict[int, int] = {}
    for j in range(2, D + 1):
        for p, e in factor_int(j):
            acc[p] = acc.get(p, 0) + e
    return LogForm._raw(Fraction(0), {p: Fraction(e) for p, e in acc.items()}, Fraction(0))


@lru_cache(maxsize=4096)
def c_exact(n: int, D: int) -> LogForm:
    """C(n, D) from the part-multiplicity closed form."""
    if n < 0 or D < 0:
        raise DomainError("c_exact needs n >= 0 and D >= 0")
    if n == 0 or D < 2:
        return LogForm.zero()
    weights = {j: (n + 1) * comb(D - j + n, n) for j in range(2, D + 1)}
    return _weighted_logs(weights) - rank_e(n, D) * log_factorial(D)


def log_binomial(D: int, m: int) -> LogForm:
    return log_factorial(D) - log_factorial(m) - log_factorial(D - m)


def c_one_identity(D: int) -> LogForm:
    """``-log prod_m binom(D, m)``, the closed form of C(1, D)."""
    return -lf_sum(log_binomial(D, m) for m in range(D + 1))


def c_recursion(n: int, D: int) -> LogForm:
    """``sum_m [C(n-1, m) - r(n-1, m) log binom(D, m)]``, which equals C(n, D)."""
    if n < 1:
        raise DomainError("recursion needs n >= 1")
    return lf_sum(c_exact(n - 1, m) - rank_e(n - 1, m) * log_binomial(D, m) for m in range(D + 1))


# ---------------------------------------------------------------------------
# Q(n, D) and S(n, D)


def q_by_binomials(n: int, D: int) -> LogForm:
    return lf_sum(rank_e(n - 1, m) * log_binomial(D, m) for m in range(D + 1))


def q_by_logs(n: int, D: int) -> LogForm:
    weights = {m: rank_e(n, m - 1) - rank_e(n, D - m) for m in range(2, D + 1)}
    return _weighted_logs(weights)


@lru_cache(maxsize=4096)
def q_exact(n: int, D: int) -> LogForm:
    """Q(n, D), computed two ways; raises if the two disagree."""
    if n < 1 or D < 0:
        raise DomainError("q_exact needs n >= 1 and D >= 0")
    a = q_by_binomials(n, D)
    b = q_by_logs(n, D)
    if a != b:
        raise InternalInconsistencyError(f"Q({n},{D}): {a} != {b}")
    return a


@lru_cache(maxsize=4096)
def s_exact(n: int, D: int) -> LogForm:
    """S(n, D) = sum_{m=2}^{D} ((m-1)^n - (D-m)^n) log m."""
    if n < 1:
        raise DomainError("s_exact needs n >= 1")
    return _weighted_logs({m: (m - 1) ** n - (D - m) ** n for m in range(2, D + 1)})


def s_split(n: int, D: int, cut: int) -> tuple[LogForm, LogForm]:
    """Split S(n, D) at ``m = cut``: terms with ``m <= cut`` and the rest."""
    low = _weighted_logs({m: (m - 1) ** n - (D - m) ** n for m in range(2, min(cut, D) + 1)})
    high = _weighted_logs({m: (m - 1) ** n - (D - m) ** n for m in range(max(cut + 1, 2), D + 1)})
    return low, high

