"""Arakelov degrees of the lattices of forms and the lower bounds for their quotients.

Lattices live in the space of degree-``D`` forms with the Bombieri inner
product.  ``E_D`` is spanned by the monomials, ``f E_{D-delta}`` by the
multiples of a primitive form ``f`` and ``F_D`` is the quotient.  Degrees are
``-(1/2) log det Gram`` and so are exact LogForms.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .asympt import b0_lower
from .certificates import BoundCertificate, NotCertified, Verdict, certify_le
from .combinat import c_exact, harmonic, rank_e, rank_fd
from .exactlog import Interval, LogForm, lf_eval, lf_from_log_rational
from .heights import bombieri_inner, bombieri_norm_sq, content_and_primitive, deg_n_section
from .linalg import determinant
from .polys import HomoPoly, monomial_exponents

LOG = lf_from_log_rational
HALF = Fraction(1, 2)


class Sign(enum.Enum):
    PAPER = "paper"
    GRAM = "gram"


@dataclass(frozen=True)
class AmbientModel:
    """Slope data of the ambient Hermitian bundle."""

    n: int
    mu: LogForm
    mu_min: LogForm
    trivial: bool = False

    @classmethod
    def standard(cls, n: int) -> "AmbientModel":
        """``Z^{n+1}`` with the l2 norm: slope 0, minimal slope ``-(1/2) log(n+1)``."""
        return cls(n, LogForm.zero(), -HALF * LOG(n + 1), True)


@dataclass(frozen=True)
class LatticeDegree:
    value: LogForm
    gram_det: Fraction
    basis_id: str
    convention: str = "gram"


def monomial_basis(n: int, D: int) -> list[HomoPoly]:
    return [HomoPoly(n, D, {e: 1}) for e in monomial_exponents(n, D)]


def gram_matrix(basis: list[HomoPoly]) -> list[list[Fraction]]:
    if not basis:
        return []
    shape = (basis[0].n, basis[0].delta)
    if any((b.n, b.delta) != shape for b in basis):
        raise ValueError("basis forms must share n and degree")
    k = len(basis)
    G = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            G[i][j] = G[j][i] = bombieri_inner(basis[i], basis[j])
    return G


def lattice_degree(basis: list[HomoPoly], basis_id: str = "") -> LatticeDegree:
    det = determinant(gram_matrix(basis))
    if det <= 0:
        raise ValueError("singular Gram matrix: basis is linearly dependent")
    return LatticeDegree(-HALF * LOG(det), det, basis_id)


@lru_cache(maxsize=512)
def degree_e(n: int, D: int) -> LatticeDegree:
    return lattice_degree(monomial_basis(n, D), f"E({n},{D})")


def deg_sym_formula(n: int, D: int, model: AmbientModel | None = None, sign: Sign | str = Sign.GRAM) -> LogForm:
    """Closed form for the degree of ``E_D``: ``+-(1/2) C(n, D) + D r(n, D) mu``."""
    sign = Sign(sign)
    model = model or AmbientModel.standard(n)
    s = HALF if sign is Sign.PAPER else -HALF
    return s * c_exact(n, D) + D * rank_e(n, D) * model.mu


def resolve_sign_convention(cases=((1, 2), (1, 3), (2, 2))) -> Sign:
    """The sign for which the closed form equals the Gram computation on ``cases``."""
    for sign in (Sign.GRAM, Sign.PAPER):
        if all(deg_sym_formula(n, D, sign=sign) == degree_e(n, D).value for n, D in cases):
            return sign
    raise RuntimeError("neither sign convention matches the Gram computation")


def _require_primitive(f: HomoPoly):
    c, _ = content_and_primitive(f)
    if c != 1:
        raise ValueError("form must be primitive (content 1)")


def deg_sub_multiplied(f: HomoPoly, D: int) -> LatticeDegree:
    """Degree of the lattice ``f E_{D - delta}`` with the norm induced from ``E_D``."""
    _require_primitive(f)
    if D < f.delta:
        raise ValueError("D must be at least deg f")
    basis = [f * m for m in monomial_basis(f.n, D - f.delta)]
    return lattice_degree(basis, f"{f}*E({f.n},{D - f.delta})")


def deg_quotient_fd(f: HomoPoly, D: int) -> LatticeDegree:
    """Degree of ``F_D = E_D / f E_{D-delta}`` by additivity."""
    if D < f.delta + 1:
        raise ValueError("need D >= delta + 1")
    e = degree_e(f.n, D)
    sub = deg_sub_multiplied(f, D)
    return LatticeDegree(e.value - sub.value, e.gram_det / sub.gram_det, f"E({f.n},{D})/{f}")


# ---------------------------------------------------------------------------
# bound evaluators


@dataclass
class LowerBound:
    """``form + b0_coeff * B0`` where ``B0`` is replaced by its certified lower bound."""

    form: LogForm
    b0: Interval | None = None

    def interval(self, precision_bits: int = 128) -> Interval:
        iv = lf_eval(self.form, precision_bits)
        if self.b0 is not None:
            iv = iv + self.b0
        return Interval(iv._lo, iv._lo, precision_bits)

    def lower(self, precision_bits: int = 128) -> float:
        return float(self.interval(precision_bits).lo)


VARIANTS = ("etape1", "prop_numerical", "final_classic", "final_arakelov", "subspace", "theorem_1_1", "naive")


@lru_cache(maxsize=16)
def certified_b0(n: int, D_max: int = 128, delta_max: int = 32, precision_bits: int = 128) -> Interval:
    return b0_lower(n, D_max, delta_max, precision_bits).value_lower


def paper_lower_bound_fd(
    n: int,
    delta: int,
    D: int,
    deg_n_s: LogForm | None = None,
    model: AmbientModel | None = None,
    variant: str = "prop_numerical",
    h_X: LogForm | None = None,
    sign: Sign | str = Sign.GRAM,
    b0: Interval | None = None,
    d: int | None = None,
) -> LowerBound:
    """Right-hand side of the selected lower bound.

    * ``etape1``: lower bound for ``deg(F_{D,J})``, with ``R0`` at its worst
      case ``(1/2) log r(n, D)``.
    * ``prop_numerical``, ``subspace``, ``final_classic``, ``final_arakelov``,
      ``theorem_1_1``: lower bounds for ``mu(F_{D,J}) / D``.
    * ``naive``: lower bound ``-(1/2) D log(n+1)`` for ``mu(F_{D,J})``.

    ``b0`` defaults to the certified lower bound from :func:`b0_lower`; the
    ``d`` of the push-forward variants defaults to ``n - 1``.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    model = model or AmbientModel.standard(n)
    if variant == "naive":
        if D < 1:
            raise ValueError("naive bound needs D >= 1")
        return LowerBound(-HALF * D * LOG(n + 1))
    if D < delta + 1:
        raise ValueError("need D >= delta + 1")
    if variant == "etape1":
        if deg_n_s is None:
            raise ValueError("etape1 needs deg_n(s)")
        r_sub = rank_e(n, D - delta)
        r1 = rank_fd(n, delta, D)
        form = (
            deg_sym_formula(n, D, model, sign)
            - deg_sym_formula(n, D - delta, model, sign)
            - r_sub * (deg_n_s + HALF * LOG(comb(D, delta)))
            - r1 * HALF * LOG(rank_e(n, D))
        )
        return LowerBound(form)

    def get_b0(m):
        if b0 is not None:
            return b0
        try:
            return certified_b0(m)
        except Exception as exc:  # pragma: no cover - defensive
            raise NotCertified(f"B0({m}) unavailable: {exc}") from exc

    if variant == "prop_numerical":
        if deg_n_s is None:
            raise ValueError("prop_numerical needs deg_n(s)")
        form = -deg_n_s / (n * delta) + (1 + Fraction(1, n * delta)) * model.mu
        return LowerBound(form, get_b0(n))
    dd = n - 1 if d is None else d
    k = (dd + 1) * delta
    if variant == "subspace":
        if deg_n_s is None:
            raise ValueError("subspace needs deg_n(s)")
        form = -deg_n_s / k + (1 + Fraction(1, k)) * model.mu_min
        return LowerBound(form, get_b0(dd + 1))
    if h_X is None:
        raise ValueError(f"{variant} needs h(X)")
    if variant == "theorem_1_1":
        form = h_X / (n * delta) - HALF
        return LowerBound(form, get_b0(n))
    form = h_X / k - HALF + (1 + Fraction(1, k)) * model.mu_min
    if variant == "final_arakelov":
        form = form + (harmonic(dd + 1) - 2 * (dd + 2) * LOG(2) - 10 * LOG(dd + 2)) / (2 * (dd + 1))
    return LowerBound(form, get_b0(dd + 1))


# ---------------------------------------------------------------------------
# harness


def quotient_slope_range(f: HomoPoly, D: int) -> tuple[LogForm, LogForm]:
    """``mu(F_{D,J}) / D`` lies between these LogForms (``R0`` at its two extremes)."""
    q = deg_quotient_fd(f, D).value
    r1 = rank_fd(f.n, f.delta, D)
    best = q / (r1 * D)
    worst = best - HALF * LOG(rank_e(f.n, D)) / D
    return worst, best


def verify_chain(
    n: int,
    delta: int,
    f: HomoPoly,
    D_range,
    sign: Sign | str | None = None,
    precision_bits: int = 256,
    b0: Interval | None = None,
    include_numerical: bool = True,
) -> list[BoundCertificate]:
    """Certificates tying the bound chain to exact Gram computations.

    For each ``D``: (i) the sub-lattice bound from the product inequality,
    (ii) additivity of degrees, (iii) the step-one bound and, if requested,
    the numerical bound (n >= 2) against the exact quotient slope.  For (iii) a Pass
    means the bound holds whatever ``R0`` is; if it holds only for some
    values of ``R0`` the verdict is NotCertified.
    """
    _require_primitive(f)
    if f.n != n or f.delta != delta:
        raise ValueError("form does not match (n, delta)")
    sign = resolve_sign_convention() if sign is None else Sign(sign)
    dns = deg_n_section(f)
    norm_f = bombieri_norm_sq(f)
    certs = []
    for D in D_range:
        e_D = degree_e(n, D)
        sub = deg_sub_multiplied(f, D)
        e_sub = degree_e(n, D - delta)
        r_sub = rank_e(n, D - delta)
        # (i) deg(f E_{D-d}) <= deg(E_{D-d}) + r(n, D-d) (-log||f|| + (1/2) log binom(D, d))
        # both sides are -(1/2) log of rationals; compare the rationals exactly
        lhs_det = sub.gram_det
        rhs_det = e_sub.gram_det * (norm_f / comb(D, delta)) ** r_sub
        ok = lhs_det >= rhs_det
        certs.append(
            BoundCertificate(
                "sub-lattice degree bound from the Bombieri product inequality",
                lhs=sub.value,
                rhs=e_sub.value + r_sub * (-HALF * LOG(norm_f) + HALF * LOG(comb(D, delta))),
                verdict=Verdict.PASS if ok else Verdict.FAIL,
                witnesses={"D": D, "det_sub": str(lhs_det), "det_bound": str(rhs_det)},
            )
        )
        if D < delta + 1:
            continue
        # (ii) additivity
        quo = deg_quotient_fd(f, D)
        lhs = e_D.value
        rhs = sub.value + quo.value
        certs.append(
            BoundCertificate(
                "additivity of degrees in 0 -> f E_{D-delta} -> E_D -> F_D -> 0",
                lhs=lhs,
                rhs=rhs,
                verdict=Verdict.PASS if lhs == rhs else Verdict.FAIL,
                relation="==",
                witnesses={"D": D},
            )
        )
        # (iii) step one: deg(F_J) >= bound; exact deg(F_J) in [deg F - r1 R0max, deg F]
        r1 = rank_fd(n, delta, D)
        worst_FJ = quo.value - r1 * HALF * LOG(rank_e(n, D))
        best_FJ = quo.value
        bound = paper_lower_bound_fd(n, delta, D, dns, variant="etape1", sign=sign).form
        certs.append(_three_way("step-one lower bound for deg(F_D)", bound, worst_FJ, best_FJ, precision_bits, D))
        if include_numerical and n >= 2:
            worst, best = quotient_slope_range(f, D)
            lb = paper_lower_bound_fd(n, delta, D, dns, variant="prop_numerical", b0=b0)
            certs.append(
                _three_way("numerical lower bound for mu(F_D)/D", lb.interval(precision_bits), worst, best, precision_bits, D)
            )
    return certs


def _three_way(ref, bound, worst, best, prec, D) -> BoundCertificate:
    b = bound if isinstance(bound, Interval) else lf_eval(bound, prec)
    w = lf_eval(worst, prec)
    t = lf_eval(best, prec)
    if b.certainly_le(w):
        verdict = Verdict.PASS
    elif b.certainly_gt(t):
        verdict = Verdict.FAIL
    else:
        verdict = Verdict.NOT_CERTIFIED
    return BoundCertificate(
        ref,
        lhs=bound,
        rhs=worst,
        verdict=verdict,
        witnesses={"D": D, "bound": b, "value_if_R0_max": w, "value_if_R0_zero": t},
    )
