"""One auxiliary hypersurface through every point of small height.

Below the certified threshold, the points of height at most B on an
irreducible hypersurface lie on a form of degree delta + 1 that is not a
multiple of the equation.  With the certified B0(2) the threshold for
x0^2 + N x1^2 - x2^2 only exceeds 1 once N is around 10^20.
"""

from fractions import Fraction

from arith_hilbert.detmethod import auxiliary_hypersurface, check_cover, threshold_B
from arith_hilbert.heights import classic_height_poly
from arith_hilbert.polys import parse_poly

for N in (10**12, 10**20, 10**24):
    f = parse_poly(f"x0^2+{N}*x1^2-x2^2")
    thr = threshold_B(2, 2, classic_height_poly(f))
    print(f"N = 1e{len(str(N)) - 1}: threshold >= {float(thr.lo):.5g}")

f = parse_poly(f"x0^2+{10**24}*x1^2-x2^2")
for B in (2, 10, 14):
    g, pts = auxiliary_hypersurface(f, Fraction(B))
    print(f"B = {B:3d}: {len(pts)} points, g = {g}, checks: {check_cover(f, g, pts)}")

fermat = parse_poly("x0^3+x1^3+x2^3")
g, pts = auxiliary_hypersurface(fermat, Fraction(3, 2), 1)
print("Fermat cubic, B = 3/2:", [list(p.coords) for p in pts.points], "-> g =", g)
