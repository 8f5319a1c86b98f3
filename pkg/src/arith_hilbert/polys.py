"""Homogeneous integer polynomials keyed by exponent vectors."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Mapping

from .exactlog import DomainError


class PolyParseError(ValueError):
    """Malformed polynomial text; ``position`` is the 0-based offending column."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@lru_cache(maxsize=256)
def monomial_exponents(n: int, D: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of degree ``D`` in ``n + 1`` variables, descending lexicographically."""
    out = []
    for bars in combinations(range(D + n), n):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(D + n - prev - 1)
        out.append(tuple(parts))
    if n == 0:
        out = [(D,)]
    out.sort(reverse=True)
    return tuple(out)


class HomoPoly:
    """Homogeneous form of degree ``delta`` in ``x0 .. xn`` with integer coefficients."""

    __slots__ = ("n", "delta", "coeffs")

    def __init__(self, n: int, delta: int, coeffs: Mapping[tuple, int]):
        clean = {}
        for e, c in coeffs.items():
            e = tuple(int(a) for a in e)
            if len(e) != n + 1 or any(a < 0 for a in e):
                raise DomainError(f"bad exponent vector {e} for n={n}")
            if sum(e) != delta:
                raise DomainError(f"exponent {e} has degree {sum(e)}, expected {delta}")
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise DomainError("HomoPoly coefficients must be integers")
                c = c.numerator
            c = int(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.n = n
        self.delta = delta
        self.coeffs = {e: c for e, c in clean.items() if c}

    # -- constructors -------------------------------------------------------
    @classmethod
    def monomial(cls, exp: Iterable[int], coef: int = 1) -> "HomoPoly":
        exp = tuple(exp)
        return cls(len(exp) - 1, sum(exp), {exp: coef})

    @classmethod
    def variable(cls, i: int, n: int) -> "HomoPoly":
        e = [0] * (n + 1)
        e[i] = 1
        return cls.monomial(e)

    @classmethod
    def from_vector(cls, n: int, delta: int, vec) -> "HomoPoly":
        """Form whose coefficients in :func:`monomial_exponents` order are ``vec``."""
        return cls(n, delta, dict(zip(monomial_exponents(n, delta), vec)))

    def to_vector(self) -> list[int]:
        return [self.coeffs.get(e, 0) for e in monomial_exponents(self.n, self.delta)]

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, HomoPoly):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.n == other.n
        return (self.n, self.delta, self.coeffs) == (other.n, other.delta, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.delta, frozenset(self.coeffs.items())))

    # -- arithmetic ---------------------------------------------------------
    def _same_space(self, other):
        if self.n != other.n or self.delta != other.delta:
            raise DomainError("forms of different shape")

    def __add__(self, other):
        self._same_space(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return HomoPoly(self.n, self.delta, out)

    def __neg__(self):
        return HomoPoly(self.n, self.delta, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HomoPoly):
            if self.n != other.n:
                raise DomainError("forms in different numbers of variables")
            out: dict = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, 0) + c1 * c2
            return HomoPoly(self.n, self.delta + other.delta, out)
        k = int(other)
        return HomoPoly(self.n, self.delta, {e: k * c for e, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = HomoPoly.monomial([0] * (self.n + 1))
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, point):
        """Exact value at an integer or rational point."""
        total = 0
        for e, c in self.coeffs.items():
            term = c
            for x, a in zip(point, e):
                if a:
                    term *= x**a
            total += term
        return total

    def content(self) -> int:
        g = 0
        for c in self.coeffs.values():
            g = gcd(g, c)
        return g

    def max_abs_coeff(self) -> int:
        return max((abs(c) for c in self.coeffs.values()), default=0)

    def leading_exponent(self) -> tuple:
        return max(self.coeffs)

    # -- text / json --------------------------------------------------------
    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            factors = [f"x{i}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a]
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f"{sign}{body}"
        return text

    def __repr__(self):
        return f"HomoPoly({self})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "delta": self.delta,
            "terms": [{"exp": list(e), "coef": str(c)} for e, c in sorted(self.coeffs.items(), reverse=True)],
        }

    @classmethod
    def from_json(cls, obj) -> "HomoPoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["n"]), int(obj["delta"]), {tuple(t["exp"]): int(t["coef"]) for t in obj["terms"]})


_TOKEN = re.compile(r"(\d+)|x(\d+)(?:\^(\d+))?|([+\-*])")


def _tokens(text: str):
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError(f"unexpected character {text[pos]!r}", pos)
        yield m.start(), m.groups()
        pos = m.end()


def parse_poly(text: str, n: int | None = None) -> HomoPoly:
    """Parse ``c*x0^a0*...*xn^an`` terms joined by ``+``/``-``.

    ``n`` defaults to the largest variable index present.  Homogeneity is
    checked term by term and reported with the column of the offending term.
    """
    toks = list(_tokens(text))
    if not toks:
        raise PolyParseError("empty polynomial", 0)
    terms = []  # (start, coef, {var: exp})
    i = 0
    while i < len(toks):
        start, (num, var, exp, op) = toks[i]
        sign = 1
        if op in ("+", "-"):
            sign = -1 if op == "-" else 1
            i += 1
            if i == len(toks):
                raise PolyParseError("expression ends with an operator", len(text))
        elif terms:
            raise PolyParseError("missing operator between terms", start)
        coef, mono = sign, {}
        term_start = toks[i][0]
        while True:
            pos, (num, var, exp, op) = toks[i]
            if op is not None:
                raise PolyParseError(f"unexpected {op!r}", pos)
            if num is not None:
                coef *= int(num)
            else:
                v = int(var)
                mono[v] = mono.get(v, 0) + (int(exp) if exp else 1)
            i += 1
            if i < len(toks) and toks[i][1][3] == "*":
                i += 1
                if i == len(toks):
                    raise PolyParseError("expression ends with an operator", len(text))
                continue
            break
        terms.append((term_start, coef, mono))
        if i < len(toks) and toks[i][1][3] not in ("+", "-"):
            raise PolyParseError("missing operator between factors", toks[i][0])
    nmax = max((max(t[2]) for t in terms if t[2]), default=0)
    if n is None:
        n = nmax
    elif nmax > n:
        raise PolyParseError(f"variable x{nmax} exceeds n={n}", 0)
    degree = sum(terms[0][2].values())
    coeffs: dict = {}
    for start, c, mono in terms:
        d = sum(mono.values())
        if d != degree:
            raise PolyParseError(f"term of degree {d} in a form of degree {degree}", start)
        e = tuple(mono.get(k, 0) for k in range(n + 1))
        coeffs[e] = coeffs.get(e, 0) + c
    return HomoPoly(n, degree, coeffs)


def divide_exact(g: HomoPoly, f: HomoPoly):
    """Return ``h`` with rational coefficients and ``g = f * h``, or ``None``.

    Lexicographic multivariate division: if the leading term of the running
    remainder is not divisible by the leading term of ``f`` then ``f`` does
    not divide ``g``.
    """
    if f.is_zero():
        raise DomainError("division by the zero form")
    if f.n != g.n:
        raise DomainError("forms in different numbers of variables")
    if g.is_zero():
        return {}
    if g.delta < f.delta:
        return None
    lf = f.leading_exponent()
    lc = Fraction(f.coeffs[lf])
    rem = {e: Fraction(c) for e, c in g.coeffs.items()}
    quot: dict = {}
    while rem:
        le = max(rem)
        if any(a < b for a, b in zip(le, lf)):
            return None
        qe = tuple(a - b for a, b in zip(le, lf))
        qc = rem[le] / lc
        quot[qe] = qc
        for e, c in f.coeffs.items():
            t = tuple(a + b for a, b in zip(e, qe))
            v = rem.get(t, 0) - qc * c
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return quot


def divides(f: HomoPoly, g: HomoPoly) -> bool:
    """True iff ``g = f * h`` for a form ``h`` with rational coefficients."""
    return divide_exact(g, f) is not None
