"""Why SOC_p^n is not homogeneous for p != 2 and n >= 3.

A strictly convex homogeneous cone has rank at most 2, so it would have to
be a Lorentz cone of the same dimension.  The Lyapunov rank (dimension of
the space of maps L with <Lx, y> = 0 on complementary pairs) is a linear
invariant: (n^2 - n + 2)/2 for the Lorentz cone, 1 for the p-cone.
"""

from homcone import ConeSpec, lyapunov_rank, nonhomogeneity_report

for n in range(3, 7):
    r_l, _ = lyapunov_rank(ConeSpec.lorentz(n))
    r_p, sys_p = lyapunov_rank(ConeSpec.pcone(3, n))
    print(f"n={n}: Lorentz rank {r_l:>2}, SOC_3 rank {r_p}  (gap ratio {sys_p.gap_ratio:.1e})")

print()
for p, n in ((3, 5), (1.5, 3), (2, 5), (3, 2)):
    rep = nonhomogeneity_report(p, n)
    print(f"SOC_{p}^{n}: {rep.verdict}")
    for line in rep.reasoning:
        print(f"    {line}")
