"""Machine-checkable records of single inequality instances."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any

from .exactlog import Interval, LogForm


class Verdict(enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    NOT_CERTIFIED = "NotCertified"


class NotCertified(RuntimeError):
    """A requested bound cannot be certified with the available data."""


def _ser(x):
    if isinstance(x, LogForm):
        return x.to_json()
    if isinstance(x, Interval):
        return x.to_json()
    if isinstance(x, (list, tuple)):
        return [_ser(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _ser(v) for k, v in x.items()}
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


@dataclass
class BoundCertificate:
    """One instance of ``lhs <relation> rhs`` with its verdict.

    ``ref`` names the inequality being checked; ``witnesses`` holds the exact
    data needed to re-check it (serialised as strings or LogForm JSON).
    """

    ref: str
    lhs: Any
    rhs: Any
    verdict: Verdict
    relation: str = "<="
    witnesses: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_json(self) -> dict:
        return {
            "paper_ref": self.ref,
            "lhs": _ser(self.lhs),
            "rhs": _ser(self.rhs),
            "verdict": self.verdict.value,
            "witnesses": dict(_ser(self.witnesses), relation=self.relation),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict) -> "BoundCertificate":
        def de(v):
            if isinstance(v, dict) and set(v) <= {"const", "logs", "pi"} and "const" in v:
                return LogForm.from_json(v)
            return v

        wit = dict(obj.get("witnesses", {}))
        relation = wit.pop("relation", "<=")
        return cls(
            ref=obj["paper_ref"],
            lhs=de(obj["lhs"]),
            rhs=de(obj["rhs"]),
            verdict=Verdict(obj["verdict"]),
            relation=relation,
            witnesses=wit,
        )


def certify_le(ref: str, lhs, rhs, precision_bits: int = 256, **witnesses) -> BoundCertificate:
    """Certificate for ``lhs <= rhs`` where each side is a rational, LogForm or Interval."""
    from fractions import Fraction

    from .exactlog import lf_eval

    def iv(x):
        if isinstance(x, Interval):
            return x
        if isinstance(x, LogForm):
            return lf_eval(x, precision_bits)
        return Interval.exact(Fraction(x), precision_bits)

    if isinstance(lhs, (LogForm, int, Fraction)) and isinstance(rhs, (LogForm, int, Fraction)):
        diff = LogForm.rational(0) + rhs - lhs
        if diff.is_rational():
            ok = diff.const_part >= 0
            return BoundCertificate(ref, lhs, rhs, Verdict.PASS if ok else Verdict.FAIL, "<=", witnesses)
        d = lf_eval(diff, precision_bits)
        if d.certainly_ge(0):
            verdict = Verdict.PASS
        elif d.certainly_lt(0):
            verdict = Verdict.FAIL
        else:
            verdict = Verdict.NOT_CERTIFIED
        witnesses.setdefault("slack", d)
        return BoundCertificate(ref, lhs, rhs, verdict, "<=", witnesses)
    a, b = iv(lhs), iv(rhs)
    if a.certainly_le(b):
        verdict = Verdict.PASS
    elif b.certainly_lt(a):
        verdict = Verdict.FAIL
    else:
        verdict = Verdict.NOT_CERTIFIED
    witnesses.setdefault("lhs_interval", a)
    witnesses.setdefault("rhs_interval", b)
    return BoundCertificate(ref, lhs, rhs, verdict, "<=", witnesses)
