"""Command-line entry point: ``arith-hilbert <command> [options]``.

Exit codes: 0 success, 1 usage or parse error, 2 some certificate failed,
3 some bound could not be certified.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import asympt, combinat, detmethod, heights, hilbert
from .certificates import BoundCertificate, NotCertified, Verdict
from .exactlog import MIN_PRECISION, DomainError, Interval, LogForm, lf_eval, lf_from_log_rational
from .polys import HomoPoly, PolyParseError, monomial_exponents, parse_poly

PRECISION_ENV = "ARITH_HILBERT_PRECISION"

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_NOT_CERTIFIED = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    precision_bits: int = 128
    epsilon: Fraction = asympt.DEFAULT_EPSILON
    b0_D_max: int = 128
    b0_delta_max: int = 32
    sign_convention: str = "auto"
    seed: int = 0
    output: str = "text"

    def validate(self):
        if not 0 < self.epsilon < Fraction(1, 6):
            raise UsageError("epsilon must lie strictly between 0 and 1/6")
        if self.precision_bits < MIN_PRECISION:
            raise UsageError(f"precision must be at least {MIN_PRECISION}")
        if self.sign_convention not in ("auto", "paper", "gram"):
            raise UsageError("sign_convention must be auto, paper or gram")
        if self.output not in ("json", "text"):
            raise UsageError("output must be json or text")
        return self

    def resolved_sign(self) -> hilbert.Sign:
        if self.sign_convention == "auto":
            return hilbert.resolve_sign_convention()
        return hilbert.Sign(self.sign_convention)


_CONFIG_TYPES = {
    "precision_bits": int,
    "epsilon": Fraction,
    "b0_D_max": int,
    "b0_delta_max": int,
    "sign_convention": str,
    "seed": int,
    "output": str,
}


def read_config_file(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment; quotes around values are optional."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_").replace(".", "_")
        if key not in _CONFIG_TYPES:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        value = value.strip("\"'")
        try:
            out[key] = _CONFIG_TYPES[key](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return out


def build_config(args) -> RunConfig:
    cfg = RunConfig()
    env = os.environ.get(PRECISION_ENV)
    if env:
        try:
            cfg.precision_bits = int(env)
        except ValueError as exc:
            raise UsageError(f"{PRECISION_ENV} must be an integer") from exc
    if args.config:
        for k, v in read_config_file(args.config).items():
            setattr(cfg, k, v)
    for key in ("precision_bits", "epsilon", "seed", "sign_convention"):
        v = getattr(args, key, None)
        if v is not None:
            setattr(cfg, key, v)
    if args.format is not None:
        cfg.output = args.format
    return cfg.validate()


# ---------------------------------------------------------------------------
# output helpers


def _json_default(x):
    if isinstance(x, (LogForm, Interval, BoundCertificate)):
        return x.to_json()
    if isinstance(x, Fraction):
        return str(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    raise TypeError(f"cannot serialise {type(x).__name__}")


class Result:
    """What a command produced: a payload, a text rendering and an exit code."""

    def __init__(self, payload, text: str, code: int = EXIT_OK):
        self.payload, self.text, self.code = payload, text, code


def _code_for(certs) -> int:
    verdicts = {c.verdict for c in certs}
    if Verdict.FAIL in verdicts:
        return EXIT_FAIL
    if Verdict.NOT_CERTIFIED in verdicts:
        return EXIT_NOT_CERTIFIED
    return EXIT_OK


def _cert_line(c: BoundCertificate) -> str:
    w = {k: v for k, v in c.witnesses.items() if isinstance(v, (int, str))}
    extra = " ".join(f"{k}={v}" for k, v in w.items())
    return f"{c.verdict.value:<12} {c.ref}  {extra}".rstrip()


def _iv_text(iv: Interval) -> str:
    return f"[{float(iv.lo):.12g}, {float(iv.hi):.12g}]"


def _poly(text: str, n: int | None = None):
    return parse_poly(text, n)


def _point(text: str):
    try:
        coords = [int(x) for x in text.replace("[", "").replace("]", "").split(",")]
    except ValueError as exc:
        raise UsageError(f"bad point {text!r}: expected comma separated integers") from exc
    return heights.normalize_point(coords)


def _logform_arg(text: str) -> LogForm:
    """``log:<rational>`` for a logarithm, otherwise the JSON LogForm schema or a rational."""
    text = text.strip()
    if text.startswith("log:"):
        return lf_from_log_rational(Fraction(text[4:]))
    if text.startswith("{"):
        return LogForm.from_json(json.loads(text))
    return LogForm.rational(Fraction(text))


# ---------------------------------------------------------------------------
# commands


def cmd_constants(args, cfg):
    n, D = args.n, args.D
    exact = {"c": combinat.c_exact, "q": combinat.q_exact, "s": combinat.s_exact}[args.kind](n, D)
    payload = {"kind": args.kind, "n": n, "D": D, "exact": exact, "value": float(exact)}
    text = str(exact)
    if args.envelope:
        fn = {"c": asympt.c_envelope, "q": asympt.q_envelope, "s": asympt.s_envelope}[args.kind]
        env = fn(n, D, cfg.epsilon, cfg.precision_bits)
        payload["envelope"] = env
        text += f"\nenvelope [{float(env.lower):.12g}, {float(env.upper):.12g}] {env.verdict.value}"
        kind = env.kind
        d0 = asympt.validated_D0(kind, n)
        payload["validated_D0"] = d0
        if d0 is not None:
            text += f" (validated from D0={d0})"
    return Result(payload, text)


def cmd_b0(args, cfg):
    res = asympt.b0_lower(args.n, args.D_max or cfg.b0_D_max, args.delta_max or cfg.b0_delta_max, cfg.precision_bits, cfg.epsilon)
    text = f"B0({args.n}) >= {float(res.value_lower.lo):.15g}\ngrid argmin (delta, D) = {res.grid_argmin}\ntail bound {_iv_text(res.tail_bound)}"
    return Result(res, text)


def cmd_height(args, cfg):
    if args.what == "point":
        p = _point(args.value)
        weil, ara = heights.weil_height(p), heights.arakelov_height_point(p)
        payload = {"point": p.to_json(), "weil": weil, "arakelov": ara}
        text = f"point {list(p.coords)}\nh = {weil}\nh_O(1) = {ara}"
    else:
        f = _poly(args.value)
        h = heights.classic_height_poly(f)
        payload = {"f": str(f), "classic": h, "deg_n": heights.deg_n_section(heights.content_and_primitive(f)[1])}
        text = f"h(f) = {h}\ndeg_n(f) = {payload['deg_n']}"
    return Result(payload, text)


def cmd_norms(args, cfg):
    f = _poly(args.f)
    if args.what == "bombieri":
        v = heights.bombieri_norm_sq(f)
        return Result({"f": str(f), "norm_sq": v}, f"||f||^2 = {v}")
    if args.what == "sup-estimate":
        est, z = heights.sup_norm_estimate(f, samples=args.samples, seed=cfg.seed)
        return Result({"f": str(f), "sup_lower_estimate": est, "seed": cfg.seed}, f"sup|f| >= {est:.15g}")
    if args.g is None:
        raise UsageError("bbem-check needs --g")
    g = _poly(args.g)
    n = max(f.n, g.n)
    cert = heights.product_inequality_check(_poly(args.f, n), _poly(args.g, n))
    return Result(cert, _cert_line(cert), _code_for([cert]))


def cmd_degree(args, cfg):
    if args.what == "e-sym":
        v = hilbert.deg_sym_formula(args.n, args.D, sign=cfg.resolved_sign())
        return Result({"n": args.n, "D": args.D, "value": v}, str(v))
    if args.what == "gram":
        d = hilbert.degree_e(args.n, args.D)
    else:
        if not args.f:
            raise UsageError(f"degree {args.what} needs --f")
        f = _poly(args.f)
        d = hilbert.deg_sub_multiplied(f, args.D) if args.what == "sub" else hilbert.deg_quotient_fd(f, args.D)
    payload = {"value": d.value, "gram_det": d.gram_det, "basis": d.basis_id, "convention": d.convention}
    return Result(payload, f"{d.value}\ndet Gram = {d.gram_det}")


def cmd_bound(args, cfg):
    deg_n = None
    n = args.n
    if args.f:
        f = _poly(args.f, n)
        deg_n = heights.deg_n_section(f)
        n = f.n
    if n is None:
        raise UsageError("bound needs --n or --f")
    h = _logform_arg(args.h) if args.h else None
    lb = hilbert.paper_lower_bound_fd(
        n, args.delta, args.D, deg_n, variant=args.variant, h_X=h, sign=cfg.resolved_sign(), d=args.d
    )
    iv = lb.interval(cfg.precision_bits)
    payload = {"variant": args.variant, "form": lb.form, "b0_lower": lb.b0, "lower": iv}
    text = f"{args.variant}: {lb.form}" + (" + B0" if lb.b0 is not None else "") + f"\n>= {float(iv.lo):.15g}"
    return Result(payload, text)


def cmd_points(args, cfg):
    ps = detmethod.enumerate_points(_poly(args.f), Fraction(args.B))
    text = f"{len(ps)} points\n" + "\n".join(str(list(p.coords)) for p in ps.points)
    return Result(ps, text.rstrip())


def cmd_threshold(args, cfg):
    iv = detmethod.threshold_B(args.n, args.delta, _logform_arg(args.h), args.K, precision_bits=cfg.precision_bits)
    return Result({"threshold": iv}, f"threshold >= {float(iv.lo):.15g}")


def cmd_cover(args, cfg):
    f = _poly(args.f)
    out = detmethod.auxiliary_hypersurface(f, Fraction(args.B), args.degree, check_irreducible=not args.no_irreducibility_check)
    if isinstance(out, detmethod.Failure):
        return Result(out, f"Fail: {out.reason} (rank {out.matrix_rank}, kernel {out.kernel_dim})", EXIT_FAIL)
    g, pts = out
    ok = detmethod.check_cover(f, g, pts)
    payload = {"g": str(g), "points": pts, "postconditions": ok}
    return Result(payload, f"g = {g}\n{len(pts)} points covered, postconditions {'hold' if ok else 'FAIL'}", EXIT_OK if ok else EXIT_FAIL)


def cmd_varpi(args, cfg):
    inp = detmethod.VarpiInputs(args.n, args.delta, args.B, args.H, args.b_prime, args.C2)
    v = detmethod.varpi_bound(inp)
    return Result({"inputs": asdict(inp), "varpi": v}, f"{v:.15g}")


def _suite_appendix(args, cfg):
    certs, notes = [], []
    out_of_range = 0
    for kind, n in asympt.VALIDITY_GRID:
        if n > args.n_max:
            continue
        d0 = asympt.validated_D0(kind, n) or 2
        fn = asympt.ENVELOPES[kind]
        for D in range(2, args.D_max + 1):
            env = fn(n, D, cfg.epsilon, 256)
            ok = env.verdict is asympt.EnvelopeVerdict.CERTIFIED
            if D < d0:
                out_of_range += not ok
                continue
            if ok:
                certs.append(BoundCertificate(f"{kind} envelope, n={n}, D={D}", env.lower, env.upper, Verdict.PASS, witnesses={"n": n, "D": D}))
            else:
                certs.append(asympt.envelope_counterexample(env))
        if d0 > args.D_max:
            notes.append(f"{kind} n={n}: validated only from D0={d0}")
    notes.append(f"{out_of_range} envelope failures below the validated D0 (see the counterexample data file)")
    return certs, notes


def _random_primitive(rng, n, delta):
    exps = monomial_exponents(n, delta)
    while True:
        f = HomoPoly.from_vector(n, delta, [rng.randint(-3, 3) for _ in exps])
        if not f.is_zero() and f.content() == 1:
            return f


def _suite_chain(args, cfg):
    rng = random.Random(cfg.seed)
    certs = []
    for _ in range(args.count):
        n = rng.randint(1, min(2, args.n_max))
        delta = rng.randint(1, 3)
        f = _random_primitive(rng, n, delta)
        hi = min(args.D_max, 8)
        certs.extend(hilbert.verify_chain(n, delta, f, range(delta + 1, hi + 1), sign=cfg.resolved_sign(), include_numerical=False))
    return certs, []


def _suite_bbem(args, cfg):
    rng = random.Random(cfg.seed)
    certs = []
    for _ in range(args.count):
        n = rng.randint(1, args.n_max)
        f = _random_primitive(rng, n, rng.randint(1, 4))
        g = _random_primitive(rng, n, rng.randint(1, 4))
        certs.append(heights.product_inequality_check(f, g))
    return certs, []


def _suite_em(args, cfg):
    rng = random.Random(cfg.seed)
    certs = []
    for _ in range(args.count):
        p = rng.randint(1, 200)
        q = p + rng.randint(1, 200)
        for fid in asympt.EM_FUNCTIONS:
            certs.append(asympt.euler_maclaurin_check(fid, p, q))
    return certs, []


SUITES = {"appendix": _suite_appendix, "chain": _suite_chain, "bbem": _suite_bbem, "em": _suite_em}


def cmd_verify(args, cfg):
    certs, notes = SUITES[args.suite](args, cfg)
    counts = {v.value: sum(c.verdict is v for c in certs) for v in Verdict}
    lines = [f"suite {args.suite}: {len(certs)} certificates, " + ", ".join(f"{k} {v}" for k, v in counts.items())]
    lines += notes
    lines += [_cert_line(c) for c in certs if c.verdict is not Verdict.PASS]
    return Result({"suite": args.suite, "counts": counts, "notes": notes, "certificates": certs}, "\n".join(lines), _code_for(certs))


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=None)
    common.add_argument("--precision-bits", dest="precision_bits", type=int, default=None)
    common.add_argument("--epsilon", type=Fraction, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--sign-convention", dest="sign_convention", choices=("auto", "paper", "gram"), default=None)
    common.add_argument("--config", default=None, help="key = value configuration file")

    p = _Parser(prog="arith-hilbert", description="Exact arithmetic Hilbert-Samuel constants and bounds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("constants", parents=[common], help="exact C, Q, S and their envelopes")
    s.add_argument("--kind", choices=("c", "q", "s"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--envelope", action="store_true")
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("b0", parents=[common], help="certified lower bound of B0(n)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--D-max", dest="D_max", type=int, default=None)
    s.add_argument("--delta-max", dest="delta_max", type=int, default=None)
    s.set_defaults(func=cmd_b0)

    s = sub.add_parser("height", parents=[common], help="heights of points and forms")
    s.add_argument("what", choices=("point", "poly"))
    s.add_argument("value")
    s.set_defaults(func=cmd_height)

    s = sub.add_parser("norms", parents=[common], help="Bombieri norm, sup estimate, product check")
    s.add_argument("what", choices=("bombieri", "sup-estimate", "bbem-check"))
    s.add_argument("--f", required=True)
    s.add_argument("--g", default=None)
    s.add_argument("--samples", type=int, default=256)
    s.set_defaults(func=cmd_norms)

    s = sub.add_parser("degree", parents=[common], help="Arakelov degrees of E_D, f E_{D-delta}, F_D")
    s.add_argument("what", choices=("gram", "e-sym", "sub", "quotient"))
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--f", default=None)
    s.set_defaults(func=cmd_degree)

    s = sub.add_parser("bound", parents=[common], help="lower bounds for the quotient F_D")
    s.add_argument("--variant", choices=hilbert.VARIANTS, required=True)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--delta", type=int, default=1)
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--f", default=None)
    s.add_argument("--h", default=None, help="height of X: rational, log:<rational> or LogForm JSON")
    s.add_argument("--d", type=int, default=None)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("points", parents=[common], help="enumerate S(X;B)")
    s.add_argument("--f", required=True)
    s.add_argument("--B", required=True)
    s.set_defaults(func=cmd_points)

    s = sub.add_parser("threshold", parents=[common], help="height below which one hypersurface covers S(X;B)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--delta", type=int, required=True)
    s.add_argument("--h", required=True)
    s.add_argument("--K", type=int, default=1)
    s.set_defaults(func=cmd_threshold)

    s = sub.add_parser("cover", parents=[common], help="auxiliary hypersurface through S(X;B)")
    s.add_argument("--f", required=True)
    s.add_argument("--B", required=True)
    s.add_argument("--degree", type=int, default=None)
    s.add_argument("--no-irreducibility-check", action="store_true")
    s.set_defaults(func=cmd_cover)

    s = sub.add_parser("varpi", parents=[common], help="global determinant method bound")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--delta", type=int, required=True)
    s.add_argument("--B", type=float, required=True)
    s.add_argument("--H", type=float, required=True)
    s.add_argument("--b-prime", dest="b_prime", type=float, default=1.0)
    s.add_argument("--C2", type=float, default=0.0)
    s.set_defaults(func=cmd_varpi)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("--suite", choices=tuple(SUITES), required=True)
    s.add_argument("--n-max", dest="n_max", type=int, default=3)
    s.add_argument("--D-max", dest="D_max", type=int, default=40)
    s.add_argument("--count", type=int, default=50)
    s.set_defaults(func=cmd_verify)
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        cfg = build_config(args)
        res = args.func(args, cfg)
    except (UsageError, PolyParseError, DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotCertified as exc:
        print(f"not certified: {exc}", file=sys.stderr)
        return EXIT_NOT_CERTIFIED
    if cfg.output == "json":
        print(json.dumps(res.payload, default=_json_default, sort_keys=True), file=stdout)
    else:
        print(res.text, file=stdout)
    return res.code


def main():  # pragma: no cover
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
