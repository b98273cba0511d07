"""Standard T-algebras: orthant, spin (Lorentz) and the 5-dimensional Vinberg algebra."""

from __future__ import annotations

import numpy as np

from .algebra import BigradedAlgebra


def _matrix_units(rank, dims):
    """Structure constants of truncated generalized matrix units.

    ``dims[(i, j)]`` is 0 or 1 off the diagonal; products land in the
    target block when it exists and vanish otherwise.
    """
    block_dims = {(i, j): dims.get((i, j), 0) for i in range(1, rank + 1) for j in range(1, rank + 1)}
    for i in range(1, rank + 1):
        block_dims[(i, i)] = 1
    products = {}
    for i in range(1, rank + 1):
        for j in range(1, rank + 1):
            for k in range(1, rank + 1):
                if block_dims[(i, j)] and block_dims[(j, k)] and block_dims[(i, k)]:
                    products[(i, j, k)] = np.ones((1, 1, 1))
    involution = {blk: np.ones((1, 1)) for blk, n in block_dims.items() if n}
    return block_dims, products, involution


def orthant(r: int) -> BigradedAlgebra:
    """Rank-``r`` diagonal algebra; its cone is the open nonnegative orthant."""
    if r < 1:
        raise ValueError("orthant rank must be >= 1")
    dims, prods, inv = _matrix_units(r, {})
    return BigradedAlgebra(r, dims, prods, inv, name=f"orthant({r})")


def spin(m: int, scale: float = 1.0) -> BigradedAlgebra:
    """Rank-2 algebra with ``A_12 = A_21 = R^m``.

    In the basis ``u_1..u_m`` of ``A_12`` (and ``u_a^*`` of ``A_21``),
    ``u_a u_b^* = <u_a, u_b> e_1`` and ``u_b^* u_a = <u_a, u_b> e_2``.  With
    ``scale != 1`` the off-diagonal bases are multiplied by ``scale``, which
    keeps the algebra but makes the bases non-orthonormal.
    """
    if m < 0:
        raise ValueError("spin dimension must be >= 0")
    if scale == 0:
        raise ValueError("scale must be nonzero")
    dims = {(1, 1): 1, (2, 2): 1, (1, 2): m, (2, 1): m}
    eye = np.eye(m)
    products = {(1, 1, 1): np.ones((1, 1, 1)), (2, 2, 2): np.ones((1, 1, 1))}
    if m:
        products[(1, 1, 2)] = eye[None, :, :]  # e_1 u = u
        products[(1, 2, 2)] = eye[:, None, :]  # u e_2 = u
        products[(2, 2, 1)] = eye[None, :, :]  # e_2 v = v
        products[(2, 1, 1)] = eye[:, None, :]  # v e_1 = v
        products[(1, 2, 1)] = (scale**2 * eye)[:, :, None]
        products[(2, 1, 2)] = (scale**2 * eye)[:, :, None]
    involution = {(1, 1): np.ones((1, 1)), (2, 2): np.ones((1, 1))}
    if m:
        involution[(1, 2)] = eye
        involution[(2, 1)] = eye
    name = f"spin({m})" if scale == 1.0 else f"spin({m}, scale={scale:g})"
    return BigradedAlgebra(2, dims, products, involution, name=name)


def vinberg() -> BigradedAlgebra:
    """Rank-3 algebra with ``n_12 = n_13 = 1`` and ``n_23 = 0``.

    Its cone is the 5-dimensional Vinberg cone of symmetric matrices
    ``[[x1, x12, x13], [x12, x2, 0], [x13, 0, x3]]`` that are positive definite.
    """
    dims, prods, inv = _matrix_units(3, {(1, 2): 1, (2, 1): 1, (1, 3): 1, (3, 1): 1})
    return BigradedAlgebra(3, dims, prods, inv, name="vinberg")


def build_builtin(kind: str, **params) -> BigradedAlgebra:
    """Dispatch on ``kind`` in ``{"orthant", "spin", "vinberg"}``."""
    if kind == "orthant":
        return orthant(int(params.get("r", 2)))
    if kind == "spin":
        return spin(int(params.get("m", 1)), float(params.get("scale", 1.0)))
    if kind == "vinberg":
        return vinberg()
    raise ValueError(f"unknown builtin algebra {kind!r}")


def change_basis(alg: BigradedAlgebra, changes) -> BigradedAlgebra:
    """Re-express ``alg`` in new block bases.

    ``changes[(i, j)]`` is an invertible ``n_ij x n_ij`` matrix whose row ``a``
    gives the new basis vector ``a`` in old coordinates.  Blocks not listed
    keep their basis.  The result is isomorphic to ``alg``.
    """
    P = {blk: np.eye(n) for blk, n in alg.block_dims.items() if n}
    for blk, mat in changes.items():
        P[blk] = np.asarray(mat, dtype=float)
    Pinv = {blk: np.linalg.inv(m) for blk, m in P.items()}
    products = {
        (i, j, k): np.einsum("ac,bd,cdo,oe->abe", P[(i, j)], P[(j, k)], T, Pinv[(i, k)])
        for (i, j, k), T in alg.products.items()
    }
    involution = {(i, j): P[(i, j)] @ M @ Pinv[(j, i)] for (i, j), M in alg.involution.items()}
    return BigradedAlgebra(alg.rank, alg.block_dims, products, involution, name=f"{alg.name}'")
