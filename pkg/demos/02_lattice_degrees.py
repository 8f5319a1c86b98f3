"""Gram determinants pin down the sign of deg(E_D) and the quotient chain.

The lattice of degree-D forms with the Bombieri norm has degree -C(n,D)/2,
which is positive.  With that sign the step-one lower bound and the
numerical bound for the quotient by a conic hold on every degree tried.
"""

from arith_hilbert.certificates import Verdict
from arith_hilbert.combinat import c_exact
from arith_hilbert.hilbert import deg_quotient_fd, degree_e, resolve_sign_convention, verify_chain
from arith_hilbert.polys import parse_poly

d = degree_e(1, 2)
print("det Gram(E_2, n=1) =", d.gram_det, "  degree =", d.value, "  C(1,2) =", c_exact(1, 2))
print("sign convention matching the Gram computation:", resolve_sign_convention().value)

f = parse_poly("x0^2+x1^2-x2^2")
for D in range(3, 7):
    q = deg_quotient_fd(f, D)
    print(f"deg F_{D} = {float(q.value):10.5f}")

certs = verify_chain(2, 2, f, range(3, 7))
counts = {v.value: sum(c.verdict is v for c in certs) for v in Verdict}
print("certificates:", counts)
for c in certs:
    if "numerical" in c.ref:
        w = c.witnesses
        print(f"  D={w['D']}: bound {float(w['bound'].lo):9.4f} <= slope/D in [{float(w['value_if_R0_max'].lo):.4f}, {float(w['value_if_R0_zero'].lo):.4f}]")
