"""Build the symmetric Adler-Moser family, check its identities and look at the roots.

Run: python3 demos/01_polynomials_and_roots.py
"""

from vortexforge.adler_moser import (
    certify_assumption_A, recursion_residual, symmetric_family, tkachenko_residual,
)
from vortexforge.roots import classify_symmetry, find_roots, ring_report

for n in range(1, 6):
    pair = symmetric_family(n)
    A, B = pair.A, pair.B
    ok = tkachenko_residual(A, B, 1).is_zero() and recursion_residual(A, symmetric_family(n - 1).A).is_zero()
    print(f"n={n}  deg A_n = {A.degree:2d}  identities exact: {ok}")

print("\nA_3 =", symmetric_family(3).A)

# roots: conjugate pairs plus real roots, grouped into n rings by modulus
for n in (3, 5):
    rs = find_roots(symmetric_family(n).A, digits=20)
    cls = classify_symmetry(rs)
    rings = ring_report(rs, n)
    print(f"\nn={n}: {len(cls.conjugate_pairs)} conjugate pairs, {len(cls.real_indices)} real roots")
    print("  ring radii  ", [round(c, 4) for c in rings["centers"]])
    print("  ring counts ", rings["counts"])
    print("  worst inclusion radius %.1e" % max(rs.radii_float()))

# square-free and coprime with the previous level, exactly and by primes
for n in (6, 20):
    mode = "exact" if n <= 10 else "modular"
    rep = certify_assumption_A(n, mode)
    print(f"\nassumption (A) at n={n} [{rep.mode}]: {rep.verdicts}  primes used: {len(rep.primes)}")
