"""Build the standard T-algebras and check the axioms.

A T-algebra is a matrix-like algebra A = sum A_ij with a product, an
involution and trace functionals rho_i.  Here we build three of them, verify
the seven axioms, and then break one on purpose to see which axiom notices.
"""

import numpy as np

from homcone import BigradedAlgebra, check_axioms, orthant, spin, vinberg

for alg in (orthant(3), spin(3), vinberg()):
    report = check_axioms(alg, tol=1e-12)
    print(f"{alg.name:<10} dim={alg.dim:<3} all axioms hold: {report.passed}")

# Scale the coefficient of e_1 * u_1 in spin(2).  The unit no longer acts as
# the identity on A_12, and associativity fails with it.
base = spin(2)
products = dict(base.products)
T = np.array(products[(1, 1, 2)])
T[0, 0, 0] *= 1.1
products[(1, 1, 2)] = T
broken = BigradedAlgebra(2, base.block_dims, products, base.involution, name="broken")
print()
print(check_axioms(broken).summary())
