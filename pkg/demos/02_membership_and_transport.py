"""Deciding membership in K(A) = {t t*} and moving points with triangular maps.

Factorizing a = t t* with t upper triangular is a generalized Cholesky
decomposition.  Its success decides whether a lies in the cone, and the
factors give an explicit transitive group action.
"""

import numpy as np

from homcone import factorize, random_interior, spin, transport, vinberg

A = spin(1)


def element(alpha, c, beta):
    return A.element({(1, 1): [alpha], (1, 2): [c], (2, 1): [c], (2, 2): [beta]})


# alpha * beta versus |a_12|^2 decides it.
for a in (element(2, 1, 1), element(1, 1, 1), element(1, 2, 1)):
    v = factorize(a)
    print(f"a = {a.to_vector()} -> {v.status.value:<8} {v.reason}")

# Any interior point can be carried to any other: w = s t^{-1}.
rng = np.random.default_rng(0)
V = vinberg()
x, y = random_interior(V, rng), random_interior(V, rng)
w, residual = transport(x, y)
print(f"\nvinberg: transport residual {residual:.1e}, diagonal of w {np.round(w.gammas, 4)}")
