"""Points of bounded height on a hypersurface and the auxiliary form covering them."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .certificates import NotCertified
from .exactlog import DomainError, Interval, LogForm, lf_eval, lf_from_log_rational
from .heights import RatPoint
from .hilbert import certified_b0
from .linalg import kernel_basis, rank, solve_in_span
from .polys import HomoPoly, divides, monomial_exponents

__all__ = [
    "PointSet",
    "Failure",
    "VarpiInputs",
    "enumerate_points",
    "enumerate_points_naive",
    "threshold_B",
    "evaluation_matrix",
    "kernel_basis",
    "divides",
    "auxiliary_hypersurface",
    "check_cover",
    "varpi_bound",
]


@dataclass
class PointSet:
    points: list[RatPoint]
    B: Fraction
    hypersurface: HomoPoly

    def __len__(self):
        return len(self.points)

    def to_json(self) -> dict:
        return {"f": str(self.hypersurface), "B": str(self.B), "points": [p.to_json() for p in self.points]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj) -> "PointSet":
        from .polys import parse_poly

        if isinstance(obj, str):
            obj = json.loads(obj)
        pts = [RatPoint(tuple(int(x) for x in p)) for p in obj["points"]]
        n = len(pts[0].coords) - 1 if pts else None
        return cls(pts, Fraction(obj["B"]), parse_poly(obj["f"], n))


def _ball_radius_sq(B) -> Fraction:
    B = Fraction(B)
    if B < 0:
        raise DomainError("B must be non-negative")
    return B * B


def _univariate_in_last(f: HomoPoly):
    """Group ``f`` as ``sum_k c_k(x_0..x_{n-1}) x_n^k``; returns ``[(k, [(prefix_exp, coef)])]``."""
    groups: dict[int, list] = {}
    for e, c in f.coeffs.items():
        groups.setdefault(e[-1], []).append((e[:-1], c))
    return sorted(groups.items())


def _prefix_value(terms, prefix) -> int:
    total = 0
    for e, c in terms:
        t = c
        for x, a in zip(prefix, e):
            if a:
                t *= x**a
        total += t
    return total


def enumerate_points(f: HomoPoly, B) -> PointSet:
    """All primitive canonical points with ``f = 0`` and ``sum x_i^2 <= B^2``, sorted ascending.

    Coordinates are fixed one at a time with the remaining radius pruning the
    range of the next; for each prefix ``f`` becomes a polynomial in the last
    variable whose coefficients are computed once.
    """
    if f.is_zero():
        raise DomainError("the zero form vanishes everywhere")
    R2 = _ball_radius_sq(B)
    bound = R2.numerator // R2.denominator  # sum of squares is an integer
    n = f.n
    groups = _univariate_in_last(f)
    found = []

    def last(prefix, rem, leading_zero):
        coeffs = [(k, _prefix_value(terms, prefix)) for k, terms in groups]
        coeffs = [(k, c) for k, c in coeffs if c]
        g0 = 0
        for x in prefix:
            g0 = gcd(g0, x)
        r = isqrt(rem)
        lo = 1 if leading_zero else -r
        for t in range(lo, r + 1):
            if gcd(g0, t) != 1:
                continue
            if sum(c * t**k for k, c in coeffs) == 0:
                found.append(RatPoint(tuple(prefix) + (t,)))

    def rec(prefix, rem, leading_zero):
        if len(prefix) == n:
            last(prefix, rem, leading_zero)
            return
        r = isqrt(rem)
        lo = 0 if leading_zero else -r
        for x in range(lo, r + 1):
            rec(prefix + [x], rem - x * x, leading_zero and x == 0)

    rec([], bound, True)
    found.sort(key=lambda p: p.coords)
    return PointSet(found, Fraction(B), f)


def enumerate_points_naive(f: HomoPoly, B) -> list[RatPoint]:
    """Reference scan of the whole box ``|x_i| <= B`` (slow; used as a test oracle)."""
    from itertools import product

    from .heights import normalize_point

    R2 = _ball_radius_sq(B)
    b = math.floor(Fraction(B))
    seen = set()
    for v in product(range(-b, b + 1), repeat=f.n + 1):
        if not any(v) or sum(x * x for x in v) > R2 or f(v) != 0:
            continue
        seen.add(normalize_point(v))
    return sorted(seen, key=lambda p: p.coords)


def threshold_B(n: int, delta: int, h_X: LogForm, K_degree: int = 1, b0: Interval | None = None, precision_bits: int = 128) -> Interval:
    """``exp(K (h/(n delta) + B0(n) - (log(n+1) + 1)/2))`` with ``B0`` at its certified lower bound.

    Only the lower end is meaningful: heights below it are covered by one
    auxiliary hypersurface.
    """
    if n < 2:
        raise DomainError("threshold needs n >= 2")
    if b0 is None:
        try:
            b0 = certified_b0(n)
        except Exception as exc:
            raise NotCertified(f"B0({n}) unavailable: {exc}") from exc
    rest = h_X / (n * delta) - Fraction(1, 2) * (lf_from_log_rational(n + 1) + 1)
    expo = (lf_eval(rest, precision_bits) + Interval.exact(b0.lo_fraction, precision_bits)) * Interval.exact(K_degree, precision_bits)
    return expo.exp()


def evaluation_matrix(points, degree: int) -> list[list[int]]:
    pts = points.points if isinstance(points, PointSet) else points
    if degree < 1:
        raise DomainError("degree must be at least 1")
    if not pts:
        return []
    n = pts[0].n
    exps = monomial_exponents(n, degree)
    rows = []
    for p in pts:
        row = []
        for e in exps:
            v = 1
            for x, a in zip(p.coords, e):
                if a:
                    v *= x**a
            row.append(v)
        rows.append(row)
    return rows


@dataclass
class Failure:
    """No kernel vector escapes ``f E_{degree - delta}``."""

    reason: str
    n_points: int
    n_columns: int
    matrix_rank: int
    kernel_dim: int
    multiples_dim: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _check_irreducible(f: HomoPoly):
    import sympy

    xs = sympy.symbols(f"x0:{f.n + 1}")
    expr = sum(c * sympy.prod([x**a for x, a in zip(xs, e)]) for e, c in f.coeffs.items())
    _, factors = sympy.factor_list(expr)
    if len(factors) != 1 or factors[0][1] != 1:
        raise DomainError(f"{f} is reducible over Q")


def auxiliary_hypersurface(f: HomoPoly, B, degree: int | None = None, check_irreducible: bool = True):
    """A form of the given degree vanishing on ``S(X; B)`` and not divisible by ``f``.

    Returns ``(g, points)`` on success or a :class:`Failure`.
    """
    degree = f.delta + 1 if degree is None else degree
    if degree < 1:
        raise DomainError("degree must be at least 1")
    if check_irreducible:
        _check_irreducible(f)
    pts = enumerate_points(f, B)
    ncols = len(monomial_exponents(f.n, degree))
    M = evaluation_matrix(pts, degree)
    kernel = kernel_basis(M, ncols)
    multiples = []
    if degree >= f.delta:
        multiples = [(f * HomoPoly(f.n, degree - f.delta, {e: 1})).to_vector() for e in monomial_exponents(f.n, degree - f.delta)]
    escaping = [v for v in kernel if solve_in_span(multiples, v) is None]
    if not escaping:
        return Failure(
            "every form vanishing on the points is a multiple of f",
            len(pts),
            ncols,
            rank(M) if M else 0,
            len(kernel),
            len(multiples),
        )
    best = min(escaping, key=lambda v: (max(abs(x) for x in v), tuple(v)))
    return HomoPoly.from_vector(f.n, degree, best), pts


def check_cover(f: HomoPoly, g: HomoPoly, points: PointSet) -> bool:
    """Independent re-check: ``g`` vanishes on every point and ``f`` does not divide ``g``."""
    return all(g(p.coords) == 0 for p in points.points) and not divides(f, g)


@dataclass(frozen=True)
class VarpiInputs:
    n: int
    delta: int
    B: float
    H_K: float
    b_prime: float = 1.0
    C2: float = 0.0

    def __post_init__(self):
        if self.n < 2:
            raise DomainError("n must be at least 2")
        if self.delta < 2:
            raise DomainError("delta must be at least 2")
        if self.b_prime < 1:
            raise DomainError("b_prime must be at least 1")
        if self.B <= 0 or self.H_K <= 0:
            raise DomainError("B and H_K must be positive")


def varpi_bound(inp: VarpiInputs) -> float:
    n, d = inp.n, inp.delta
    expo_B = n / ((n - 1) * d ** (1 / (n - 1)))
    log_val = (
        inp.C2
        + expo_B * math.log(inp.B)
        + (4 - 1 / (n - 1)) * math.log(d)
        + math.log(inp.b_prime)
        - math.log(inp.H_K) / (n * d)
    )
    return math.exp(log_val)
