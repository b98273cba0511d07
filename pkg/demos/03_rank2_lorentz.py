"""Rank-2 algebra cones are Lorentz cones.

S(a) = ((alpha + beta)/2, (alpha - beta)/2, Q a_12) sends Hermitian elements
of a rank-2 T-algebra onto R^(m+2), and K(A) onto the interior of the
Lorentz cone.  We compare both membership tests on random samples, using a
deliberately non-orthonormal basis so that Q is not the identity.
"""

import numpy as np

from homcone import change_basis, classify, factorize, iso_inverse, iso_map, spin

rng = np.random.default_rng(1)
P = np.eye(3) + 0.4 * rng.standard_normal((3, 3))
A = change_basis(spin(3), {(1, 2): P, (2, 1): np.linalg.inv(P).T})
c = classify(A)
print(f"classification: {c}\nQ =\n{np.round(c.Q, 4)}")

agree = 0
for _ in range(500):
    a = iso_inverse(A, rng.standard_normal(5), c.Q)
    s = iso_map(a, c.Q)
    inside_lorentz = s[0] > np.linalg.norm(s[1:])
    inside_algebra = factorize(a.element).status.value == "Interior"
    agree += inside_lorentz == inside_algebra
print(f"membership agreement on 500 random Hermitian elements: {agree}/500")
