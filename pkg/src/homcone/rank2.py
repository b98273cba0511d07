"""Rank <= 2 algebra cones and the explicit linear isomorphism onto a Lorentz cone.

For a rank-2 T-algebra with ``m = dim A_12 >= 1``, a Hermitian element
``a = alpha e_1 + a_12 + a_12^* + beta e_2`` is sent to

    S(a) = ((alpha + beta) / 2, (alpha - beta) / 2, Q a_12)

where ``Q^T Q`` is the Gram matrix of the trace inner product on ``A_12``.
``S`` maps ``K(A)`` onto the interior of the Lorentz cone in ``R^(m+2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import AlgebraElement, BigradedAlgebra, inner, involute
from .errors import DomainError, OutOfScopeError

HERMITIAN_TOL = 1e-12


class Rank2Kind(str, Enum):
    RAY = "Ray"
    ORTHANT2 = "Orthant2"
    LORENTZ = "Lorentz"


@dataclass
class Rank2Classification:
    kind: Rank2Kind
    m: int = 0
    Q: np.ndarray | None = None

    @property
    def lorentz_dim(self) -> int | None:
        return self.m + 2 if self.kind is Rank2Kind.LORENTZ else None

    @property
    def matrix(self) -> np.ndarray | None:
        """Matrix of ``S`` in the coordinates ``(alpha, beta, a_12)`` of ``H(A)``."""
        if self.Q is None:
            return None
        m = self.m
        S = np.zeros((m + 2, m + 2))
        S[0, :2] = 0.5
        S[1, :2] = (0.5, -0.5)
        S[2:, 2:] = self.Q
        return S

    def __str__(self):
        if self.kind is Rank2Kind.LORENTZ:
            return f"Lorentz({self.m + 2})"
        return self.kind.value


@dataclass
class HermitianElement:
    """Element fixed by the involution, with ``alpha``, ``beta`` and ``a_12`` at hand."""

    element: AlgebraElement

    def __post_init__(self):
        a = self.element
        if a.algebra.rank != 2:
            raise DomainError("Hermitian rank-2 elements need a rank-2 algebra")
        dev = (a - involute(a)).norm()
        if dev > HERMITIAN_TOL * (1.0 + a.norm()):
            raise DomainError(f"element is not Hermitian (|a - a*| = {dev:.3g})")

    @property
    def alpha(self) -> float:
        return self.element.rho(1)

    @property
    def beta(self) -> float:
        return self.element.rho(2)

    @property
    def a12(self) -> np.ndarray:
        return self.element.block(1, 2)


def _require_rank2_lorentz(alg):
    if alg.rank != 2 or alg.block_dims[(1, 2)] == 0:
        raise DomainError("the Lorentz isomorphism needs rank 2 and dim A_12 >= 1")


def gram_factor(alg: BigradedAlgebra) -> np.ndarray:
    """Upper-triangular ``Q`` with positive diagonal and ``Q^T Q = G``.

    ``G[a, b] = <u_a, u_b>`` for the basis ``u`` of ``A_12``.
    """
    _require_rank2_lorentz(alg)
    m = alg.block_dims[(1, 2)]
    basis = [alg.basis_element(1, 2, a) for a in range(m)]
    G = np.array([[inner(u, v) for v in basis] for u in basis])
    G = 0.5 * (G + G.T)
    try:
        L = np.linalg.cholesky(G)
    except np.linalg.LinAlgError:
        raise DomainError(
            "inner product is not positive definite on A_12 (axiom (v) fails)"
        ) from None
    return L.T


def _as_hermitian(a):
    return a if isinstance(a, HermitianElement) else HermitianElement(a)


def iso_map(a, Q: np.ndarray | None = None) -> np.ndarray:
    """``S(a)`` in ``R^(m+2)``."""
    h = _as_hermitian(a)
    alg = h.element.algebra
    _require_rank2_lorentz(alg)
    if Q is None:
        Q = gram_factor(alg)
    return np.concatenate([[(h.alpha + h.beta) / 2, (h.alpha - h.beta) / 2], Q @ h.a12])


def iso_inverse(alg: BigradedAlgebra, v, Q: np.ndarray | None = None) -> HermitianElement:
    """The Hermitian ``a`` with ``S(a) = v``."""
    _require_rank2_lorentz(alg)
    if Q is None:
        Q = gram_factor(alg)
    v = np.asarray(v, dtype=float)
    m = alg.block_dims[(1, 2)]
    if v.shape != (m + 2,):
        raise ValueError(f"expected a vector of length {m + 2}")
    alpha, beta = v[0] + v[1], v[0] - v[1]
    a12 = np.linalg.solve(Q, v[2:])
    a = alg.diagonal([alpha, beta]) + AlgebraElement(alg, {(1, 2): a12})
    a = a + AlgebraElement(alg, {(2, 1): a12 @ alg.involution[(1, 2)]})
    return HermitianElement(a)


def classify(alg: BigradedAlgebra) -> Rank2Classification:
    """Ray for rank 1, orthant for rank 2 with ``A_12 = 0``, Lorentz otherwise."""
    if alg.rank == 1:
        return Rank2Classification(Rank2Kind.RAY)
    if alg.rank > 2:
        raise OutOfScopeError(
            f"rank {alg.rank} > 2: such a cone has a proper face of dimension >= 2 "
            "and is never strictly convex; no rank-2 classification applies"
        )
    m = alg.block_dims[(1, 2)]
    if m == 0:
        return Rank2Classification(Rank2Kind.ORTHANT2)
    return Rank2Classification(Rank2Kind.LORENTZ, m, gram_factor(alg))
