"""The cone ``K(A) = {t t^* : t upper triangular, positive diagonal}`` of a T-algebra.

Membership is decided by a generalized Cholesky factorization that eliminates
the last column first, so that at rank 2 it reduces to ``gamma_2 = sqrt(beta)``,
``t_12 = a_12 / gamma_2``, ``gamma_1^2 = alpha - rho_1(a_12 a_12^*) / beta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AlgebraElement,
    BigradedAlgebra,
    block_product,
    block_star,
    inner,
    involute,
    multiply,
)
from .errors import MalformedAlgebraError, NotTransportableError, SingularFactorError
from .status import Status

DEFAULT_TOL = 1e-9


@dataclass
class TriangularFactor:
    """Upper-triangular element ``t`` with its diagonal scalars ``gamma_i = rho_i(t_ii)``."""

    element: AlgebraElement
    gammas: np.ndarray = field(init=False)

    def __post_init__(self):
        alg = self.element.algebra
        for (i, j), v in self.element.blocks.items():
            if j < i and np.any(v != 0.0):
                raise ValueError(f"factor has nonzero strictly-lower block ({i},{j})")
        self.gammas = np.array([self.element.rho(i) for i in range(1, alg.rank + 1)])

    @classmethod
    def from_blocks(cls, alg: BigradedAlgebra, gammas, offdiag=None) -> TriangularFactor:
        """Build ``t`` from diagonal scalars and upper off-diagonal coordinates."""
        blocks = {(i, i): [g / alg.rho[i - 1]] for i, g in enumerate(gammas, start=1)}
        blocks.update(offdiag or {})
        return cls(AlgebraElement(alg, blocks))

    @property
    def algebra(self) -> BigradedAlgebra:
        return self.element.algebra

    @property
    def in_closed(self) -> bool:
        """Membership in ``T_+``."""
        return bool(np.all(self.gammas >= 0))

    @property
    def in_open(self) -> bool:
        """Membership in ``T_++``."""
        return bool(np.all(self.gammas > 0))


@dataclass
class MembershipVerdict:
    status: Status
    factor: TriangularFactor | None
    residual: float
    reason: str = ""

    @property
    def in_closure(self) -> bool:
        return self.status is not Status.OUTSIDE


def reconstruct(t: TriangularFactor | AlgebraElement) -> AlgebraElement:
    """``t t^*``."""
    el = t.element if isinstance(t, TriangularFactor) else t
    return multiply(el, involute(el))


def _relative_residual(approx, target):
    diff = (approx - target).norm()
    scale = target.norm()
    return diff / scale if scale > 0 else diff


def factorize(a: AlgebraElement, tol: float = DEFAULT_TOL) -> MembershipVerdict:
    """Decide whether ``a`` lies in ``K(A)``, on its boundary, or outside ``cl K(A)``.

    ``tol`` is relative: comparisons use ``tol * (1 + |a|)``.  Columns are
    processed from ``k = r`` down to 1.  A diagonal pivot within the band
    takes the boundary path (the column above it must vanish and the factor
    column is set to zero); a pivot below ``-band`` means outside.
    """
    alg = a.algebra
    vec = a.to_vector()
    if not np.all(np.isfinite(vec)):
        raise ValueError("element has non-finite coordinates")
    band = tol * (1.0 + a.norm())

    asym = (a - involute(a)).norm()
    if asym > band:
        return MembershipVerdict(
            Status.OUTSIDE, None, math.inf, f"not fixed by the involution (|a - a*| = {asym:.3g})"
        )

    r = alg.rank
    d = alg.block_dims
    work = {(i, j): a.blocks[(i, j)].copy() for (i, j) in alg.blocks if i <= j}
    t = {blk: np.zeros(n) for blk, n in d.items() if n}
    gammas = np.zeros(r)
    interior = True

    for k in range(r, 0, -1):
        pivot = alg.rho[k - 1] * work[(k, k)][0]
        column = [i for i in range(1, k) if d[(i, k)]]
        if pivot > band:
            g = math.sqrt(pivot)
            gammas[k - 1] = g
            t[(k, k)][0] = g / alg.rho[k - 1]
            for i in column:
                t[(i, k)] = work[(i, k)] / g
        elif pivot >= -band:
            interior = False
            above = max((float(np.linalg.norm(work[(i, k)])) for i in column), default=0.0)
            if above > band:
                return MembershipVerdict(
                    Status.OUTSIDE, None, math.inf,
                    f"pivot {k} vanishes but column above it has norm {above:.3g}",
                )
        else:
            return MembershipVerdict(
                Status.OUTSIDE, None, math.inf, f"pivot {k} is negative ({pivot:.3g})"
            )
        # a_ij -= t_ik t_jk^* for i <= j < k
        stars = {j: block_star(alg, j, k, t[(j, k)]) for j in range(1, k) if d[(j, k)]}
        for j, tjk_star in stars.items():
            for i in range(1, j + 1):
                if d[(i, k)] and d[(i, j)]:
                    work[(i, j)] -= block_product(alg, i, k, j, t[(i, k)], tjk_star)

    factor = TriangularFactor(AlgebraElement(alg, t))
    residual = _relative_residual(reconstruct(factor), a)
    if residual > tol:
        return MembershipVerdict(
            Status.OUTSIDE, None, residual,
            f"reconstruction residual {residual:.3g} exceeds tolerance",
        )
    interior = interior and bool(np.all(gammas > band))
    return MembershipVerdict(Status.INTERIOR if interior else Status.BOUNDARY, factor, residual)


def triangular_inverse(t: TriangularFactor) -> TriangularFactor:
    """Back-substitution for ``w`` with ``t w = e_1 + ... + e_r``."""
    alg = t.algebra
    if not np.all(t.gammas > 0):
        raise SingularFactorError(f"diagonal scalars must be positive, got {t.gammas}")
    d = alg.block_dims
    tb = t.element.blocks
    w = {blk: np.zeros(n) for blk, n in d.items() if n}
    for j in range(1, alg.rank + 1):
        w[(j, j)][0] = 1.0 / (t.gammas[j - 1] * alg.rho[j - 1])
        for i in range(j - 1, 0, -1):
            if not d[(i, j)]:
                continue
            acc = np.zeros(d[(i, j)])
            for k in range(i + 1, j + 1):
                if d[(i, k)] and d[(k, j)]:
                    acc += block_product(alg, i, k, j, tb[(i, k)], w[(k, j)])
            w[(i, j)] = -acc / t.gammas[i - 1]
    return TriangularFactor(AlgebraElement(alg, w))


def transport(x: AlgebraElement, y: AlgebraElement, tol: float = DEFAULT_TOL):
    """Triangular ``w`` carrying ``x = t t^*`` to ``y = s s^*``.

    Returns ``(w, residual)`` where ``w = s t^{-1}`` and ``residual`` is the
    relative error of ``(w t)(w t)^*`` against ``y``.  The action is evaluated
    through ``u = w t`` and ``u u^*`` only; no other parenthesization is used.
    """
    fx, fy = factorize(x, tol), factorize(y, tol)
    for label, verdict in (("source", fx), ("target", fy)):
        if verdict.status is not Status.INTERIOR:
            raise NotTransportableError(f"{label} is {verdict.status}, not interior")
    w = multiply(fy.factor.element, triangular_inverse(fx.factor).element)
    u = multiply(w, fx.factor.element)
    residual = _relative_residual(reconstruct(u), y)
    return TriangularFactor(w), residual


@dataclass
class PrincipalFace:
    """Generators ``e_2..e_r`` of a face of ``cl K(A)`` inside ``{e_1}^perp``."""

    generators: list
    dim_lower_bound: int
    inner_violation: float
    generators_in_closure: bool

    def __iter__(self):
        return iter((self.generators, self.dim_lower_bound))


def principal_face(alg: BigradedAlgebra) -> PrincipalFace:
    """Exhibit the proper face ``cl K(A) ∩ {e_1}^perp`` of dimension ``>= r - 1``.

    ``inner_violation`` is the largest ``|<g, h>|`` over ``g`` a generator and
    ``h`` either ``e_1`` or a different generator.
    """
    if alg.rank == 1:
        return PrincipalFace([], 0, 0.0, True)
    e1 = alg.unit(1)
    gens = [alg.unit(i) for i in range(2, alg.rank + 1)]
    viol = max(abs(inner(e1, g)) for g in gens)
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            viol = max(viol, abs(inner(gens[a], gens[b])))
    in_closure = all(factorize(g).in_closure for g in gens)
    return PrincipalFace(gens, alg.rank - 1, viol, in_closure)


def certifies_not_strictly_convex(alg: BigradedAlgebra) -> bool:
    """True when the principal face has dimension >= 2, i.e. rank >= 3."""
    face = principal_face(alg)
    return face.generators_in_closure and face.dim_lower_bound >= 2


def random_factor(
    alg: BigradedAlgebra,
    rng: np.random.Generator,
    diag_range=(0.1, 10.0),
    offdiag_scale=1.0,
    offdiag="normal",
) -> TriangularFactor:
    """Random element of ``T_++``.

    Diagonals are log-uniform on ``diag_range``.  Off-diagonal coordinates
    are ``offdiag_scale * N(0, 1)`` (``offdiag="normal"``) or uniform on
    ``[-offdiag_scale, offdiag_scale]`` (``offdiag="uniform"``).
    """
    lo, hi = diag_range
    gammas = np.exp(rng.uniform(math.log(lo), math.log(hi), size=alg.rank))
    upper = {}
    for (i, j) in alg.blocks:
        if i < j:
            n = alg.block_dims[(i, j)]
            if offdiag == "normal":
                upper[(i, j)] = offdiag_scale * rng.standard_normal(n)
            elif offdiag == "uniform":
                upper[(i, j)] = rng.uniform(-offdiag_scale, offdiag_scale, size=n)
            else:
                raise ValueError(f"unknown off-diagonal distribution {offdiag!r}")
    return TriangularFactor.from_blocks(alg, gammas, upper)


def random_interior(alg: BigradedAlgebra, rng: np.random.Generator, **kwargs) -> AlgebraElement:
    return reconstruct(random_factor(alg, rng, **kwargs))


def dual_certificate_e1(alg: BigradedAlgebra, samples: int = 1000, seed: int = 0) -> float:
    """``max(0, -min <e_1, x>)`` over sampled cone points; 0 certifies ``e_1 in K(A)^*``."""
    if any(c == 0.0 for c in alg.rho):
        raise MalformedAlgebraError("axiom (i) fails; e_1 is undefined")
    e1 = alg.unit(1)
    worst = math.inf
    for s in range(samples):
        rng = np.random.default_rng([seed, s])
        x = random_interior(alg, rng, diag_range=(1e-3, 1e3))
        worst = min(worst, inner(e1, x))
    return max(0.0, -worst)
