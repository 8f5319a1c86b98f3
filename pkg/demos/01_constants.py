"""Exact values of C(n, D) and how they sit inside their asymptotic envelopes.

For n = 1 the envelope holds from D = 2 onwards.  For n = 2 it holds up to
D = 30 and then the exact value escapes above the upper end; the residual
after the dominant terms grows like (1/2) D^2 log D, a sign problem in the
D^n log D coefficient.
"""

from arith_hilbert.asympt import c_dominant, c_envelope
from arith_hilbert.combinat import c_bruteforce, c_exact

print("C(1,2) =", c_exact(1, 2))
print("C(2,2) =", c_exact(2, 2), "  brute force:", c_bruteforce(2, 2))

print("\n n   D    lower          exact          upper        verdict")
for n, D in [(1, 10), (1, 40), (2, 20), (2, 30), (2, 31), (2, 60), (3, 60)]:
    env = c_envelope(n, D)
    print(f"{n:2d} {D:3d} {float(env.lower):14.6g} {float(env.exact):14.6g} {float(env.upper):14.6g}  {env.verdict.value}")

print("\nresidual (C - dominant) / D^2 for n = 2:")
for D in (10, 20, 40, 80, 160):
    r = float(c_exact(2, D) - c_dominant(2, D)) / D**2
    print(f"  D={D:4d}  {r:9.4f}")
