"""Certified lower bounds for B0(n).

The infimum over (delta, D) is evaluated on a finite grid with interval
arithmetic; beyond the grid an explicit majorant of the remainder terms
gives a tail bound.  The certified value is the smaller of the two.
"""

from arith_hilbert.asympt import b0_lower

for n in (2, 3, 4):
    res = b0_lower(n)
    print(f"B0({n}) >= {float(res.value_lower.lo):.8f}   grid argmin (delta, D) = {res.grid_argmin}   tail >= {float(res.tail_bound.lo):.4f}")

print("\ngrowing the search box for n = 3:")
for D_max in (8, 16, 32, 64, 128):
    print(f"  D_max={D_max:4d}  {float(b0_lower(3, D_max, 16).value_lower.lo):.8f}")
