"""Heights of rational points and integer forms; Bombieri norms over Q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, gcd, isqrt
from typing import Sequence

import numpy as np

from .certificates import BoundCertificate, Verdict
from .combinat import rank_e
from .exactlog import DomainError, LogForm, lf_from_log_rational
from .polys import HomoPoly

LOG = lf_from_log_rational


@dataclass(frozen=True)
class RatPoint:
    """Primitive integer representative of a point of projective space."""

    coords: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def norm_sq(self) -> int:
        return sum(x * x for x in self.coords)

    def to_json(self) -> list[int]:
        return list(self.coords)


def normalize_point(raw: Sequence[int]) -> RatPoint:
    """Divide by the gcd and make the first nonzero coordinate positive."""
    coords = [int(x) for x in raw]
    g = 0
    for x in coords:
        g = gcd(g, x)
    if g == 0:
        raise DomainError("the zero vector is not a projective point")
    coords = [x // g for x in coords]
    if next(x for x in coords if x) < 0:
        coords = [-x for x in coords]
    return RatPoint(tuple(coords))


def weil_height(p: RatPoint) -> LogForm:
    """``log max |x_i|`` of a primitive representative."""
    return LOG(max(abs(x) for x in p.coords))


def arakelov_height_point(p: RatPoint) -> LogForm:
    """``(1/2) log sum x_i^2`` of a primitive representative."""
    return Fraction(1, 2) * LOG(p.norm_sq())


# ---------------------------------------------------------------------------
# forms


def content_and_primitive(f: HomoPoly) -> tuple[int, HomoPoly]:
    if f.is_zero():
        raise DomainError("the zero form has no content")
    c = f.content()
    return c, HomoPoly(f.n, f.delta, {e: a // c for e, a in f.coeffs.items()})


def classic_height_poly(f: HomoPoly) -> LogForm:
    """``log`` of the largest absolute coefficient of the primitive part."""
    _, prim = content_and_primitive(f)
    return LOG(prim.max_abs_coeff())


def bombieri_weight(exp: Sequence[int], inverse: bool = False) -> Fraction:
    """``alpha! / D!`` (or ``D! / alpha!`` when ``inverse``)."""
    num = 1
    for a in exp:
        num *= factorial(a)
    w = Fraction(num, factorial(sum(exp)))
    return 1 / w if inverse else w


def bombieri_inner(f: HomoPoly, g: HomoPoly, inverse_weights: bool = False) -> Fraction:
    if f.n != g.n or f.delta != g.delta:
        raise DomainError("Bombieri inner product needs forms of equal shape")
    total = Fraction(0)
    for e, a in f.coeffs.items():
        b = g.coeffs.get(e)
        if b:
            total += a * b * bombieri_weight(e, inverse_weights)
    return total


def bombieri_norm_sq(f: HomoPoly, inverse_weights: bool = False) -> Fraction:
    if f.is_zero():
        raise DomainError("norm of the zero form requested")
    return bombieri_inner(f, f, inverse_weights)


def deg_n_section(f: HomoPoly) -> LogForm:
    """Normalised Arakelov degree of the section defined by ``f`` over Q.

    The finite places contribute ``log content`` and the archimedean place
    ``-log ||f||_sym``; together this is ``-(1/2) log ||primitive part||^2``.
    """
    c, prim = content_and_primitive(f)
    return -Fraction(1, 2) * LOG(bombieri_norm_sq(prim))


@dataclass(frozen=True)
class NormGapBounds:
    """All that is known of the John/Bombieri gap: ``0 <= R0 <= (1/2) log r``."""

    r: int
    r0_lo: LogForm
    r0_hi: LogForm

    @classmethod
    def for_rank(cls, n: int, D: int) -> "NormGapBounds":
        r = rank_e(n, D)
        return cls(r, LogForm.zero(), Fraction(1, 2) * LOG(r))


# ---------------------------------------------------------------------------
# sup norm estimate (not certified upward)


def _fs_value_sq_exact(f: HomoPoly, z: np.ndarray) -> Fraction:
    """Exact ``|f(z)|^2 / |z|^(2 delta)`` at the binary point nearest the float input."""
    re = [Fraction(float(x)) for x in z.real]
    im = [Fraction(float(x)) for x in z.imag]
    fr, fi = Fraction(0), Fraction(0)
    for e, c in f.coeffs.items():
        tr, ti = Fraction(c), Fraction(0)
        for k, a in enumerate(e):
            for _ in range(a):
                tr, ti = tr * re[k] - ti * im[k], tr * im[k] + ti * re[k]
        fr += tr
        fi += ti
    nz = sum(r * r + i * i for r, i in zip(re, im))
    return (fr * fr + fi * fi) / nz**f.delta


def _sqrt_floor(q: Fraction, bits: int = 60) -> Fraction:
    scale = 1 << bits
    return Fraction(isqrt(q.numerator * scale * scale // q.denominator), scale)


def sup_norm_estimate(f: HomoPoly, samples: int = 256, refine_iters: int = 60, seed: int = 0):
    """Lower estimate of the Fubini-Study sup norm ``sup |f(z)| / |z|^delta``.

    Random complex unit vectors are sampled and the best few are refined by
    projected gradient ascent on ``|f|^2``.  The returned value is a certified
    lower bound of the value at the returned point (exact rational evaluation
    there), hence of the sup norm; it is not guaranteed close to the sup.
    Returns ``(estimate, point)``.
    """
    if f.is_zero():
        raise DomainError("sup norm of the zero form requested")
    rng = np.random.default_rng(seed)
    exps = np.array(list(f.coeffs.keys()), dtype=float)
    coefs = np.array([float(c) for c in f.coeffs.values()])
    dim = f.n + 1

    def val(Z):
        # Z: (k, dim) complex, unit rows
        mon = np.prod(Z[:, None, :] ** exps[None, :, :], axis=2)
        return mon @ coefs

    def grad(z):
        out = np.zeros(dim, dtype=complex)
        for i in range(dim):
            e = exps.copy()
            mask = e[:, i] > 0
            if not mask.any():
                continue
            c = coefs[mask] * e[mask, i]
            e = e[mask]
            e[:, i] -= 1
            out[i] = np.sum(c * np.prod(z[None, :] ** e, axis=1))
        return out

    Z = rng.normal(size=(samples, dim)) + 1j * rng.normal(size=(samples, dim))
    basis = np.eye(dim, dtype=complex)
    Z = np.vstack([Z, basis, np.ones((1, dim), dtype=complex)])
    Z /= np.linalg.norm(Z, axis=1, keepdims=True)
    vals = np.abs(val(Z))
    order = np.argsort(-vals)[: min(8, len(vals))]
    best_z, best_v = Z[order[0]], vals[order[0]]
    for idx in order:
        z = Z[idx].copy()
        v = abs(val(z[None, :])[0])
        step = 0.5
        for _ in range(refine_iters):
            fz = val(z[None, :])[0]
            g = fz * np.conj(grad(z))
            # remove the radial component; the objective is scale invariant on the sphere
            g -= np.vdot(z, g) * z
            gn = np.linalg.norm(g)
            if gn < 1e-15:
                break
            while step > 1e-12:
                cand = z + step * g / gn
                cand /= np.linalg.norm(cand)
                cv = abs(val(cand[None, :])[0])
                if cv > v:
                    z, v = cand, cv
                    step *= 1.5
                    break
                step /= 2
            else:
                break
        if v > best_v:
            best_z, best_v = z, v
    certified = _sqrt_floor(_fs_value_sq_exact(f, best_z))
    return float(certified), best_z


# ---------------------------------------------------------------------------
# product inequality


def product_inequality_check(f: HomoPoly, g: HomoPoly) -> BoundCertificate:
    """Exact check of ``||f g||^2 binom(D + D', D) >= ||f||^2 ||g||^2``."""
    if f.n != g.n:
        raise DomainError("forms in different numbers of variables")
    fg = f * g
    lhs = bombieri_norm_sq(f) * bombieri_norm_sq(g)
    rhs = bombieri_norm_sq(fg) * comb(f.delta + g.delta, f.delta)
    verdict = Verdict.PASS if lhs <= rhs else Verdict.FAIL
    return BoundCertificate(
        "Bombieri norm product lower bound",
        lhs=LogForm.rational(lhs),
        rhs=LogForm.rational(rhs),
        verdict=verdict,
        witnesses={"f": str(f), "g": str(g), "equality": lhs == rhs},
    )
