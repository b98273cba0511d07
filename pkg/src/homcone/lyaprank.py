"""Numerical Lyapunov rank and the non-homogeneity certificate for p-cones.

A linear map ``L`` on ``R^d`` is Lyapunov-like for a cone ``K`` when
``<L x, y> = 0`` for every complementary pair ``x in K``, ``y in K^*``,
``<x, y> = 0``.  The Lyapunov rank is the dimension of the space of such maps
and is invariant under linear isomorphism of cones.  Here it is computed as
the nullity of the stacked constraints ``vec(y x^T) . vec(L) = 0`` over
sampled pairs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import pcone as _pcone
from .errors import AmbiguousRankError, UnderdeterminedError
from .pcone import ComplementarityPair, PConeSpec

ZERO_THRESHOLD = 1e-8
MIN_GAP = 1e3
DEFAULT_SEED = 20170101
ROWS_PER_ENTRY = 3
DEFAULT_PAIRS_PER_ENTRY = 5


class ConditioningWarning(UserWarning):
    """Exponent close to 1 or very large; boundary gradients lose accuracy."""


@dataclass(frozen=True)
class ConeSpec:
    """Tagged cone description: ``pcone``, ``lorentz``, ``orthant`` or ``algebra``."""

    kind: str
    n: int = 0
    p: float | None = None
    algebra: object = None

    @classmethod
    def pcone(cls, p, n):
        return cls("pcone", int(n), _pcone.parse_p(p))

    @classmethod
    def lorentz(cls, n):
        return cls("lorentz", int(n), 2.0)

    @classmethod
    def orthant(cls, n):
        return cls("orthant", int(n))

    @classmethod
    def from_algebra(cls, alg):
        return cls("algebra", 0, None, alg)

    @property
    def dim(self) -> int:
        return self.n

    def __str__(self):
        if self.kind == "pcone":
            return f"pcone(p={_pcone.format_p(self.p)}, n={self.n})"
        if self.kind == "algebra":
            return f"algebra({getattr(self.algebra, 'name', '?')})"
        return f"{self.kind}({self.n})"


def orthant_pairs(n: int, count: int, seed: int = 0) -> list[ComplementarityPair]:
    """Complementary pairs of ``R^n_+`` with complementary random supports."""
    pairs = []
    for k in range(count):
        rng = np.random.default_rng([seed, k])
        mask = rng.random(n) < 0.5
        if mask.all() or not mask.any():
            flip = rng.integers(n)
            mask[flip] = not mask[flip]
        x = np.where(mask, rng.exponential(size=n), 0.0)
        y = np.where(mask, 0.0, rng.exponential(size=n))
        pairs.append(ComplementarityPair(x, y))
    return pairs


def sample_pairs(spec: ConeSpec, count: int, seed: int = 0) -> list[ComplementarityPair]:
    if spec.kind in ("pcone", "lorentz"):
        return _pcone.complementarity_pairs(PConeSpec(spec.n, spec.p), count, seed)
    if spec.kind == "orthant":
        return orthant_pairs(spec.n, count, seed)
    raise ValueError(
        f"Lyapunov rank is not available for {spec.kind} cones (no dual description)"
    )


@dataclass
class LyapunovSystem:
    """Stacked linear constraints on ``vec(L)`` (row-major ``d x d``).

    Rows are normalized to unit length, which leaves the nullspace unchanged.
    ``coverage`` is the smaller of the ranks of the sampled ``x``'s and
    ``y``'s: for a full-dimensional pointed cone complementary pairs exist
    along every extreme ray, so a faithful sample spans ``R^d`` on both sides.
    """

    constraints: np.ndarray
    singular_values: np.ndarray
    nullity: int
    gap_ratio: float
    coverage: int
    nullspace: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return math.isqrt(self.constraints.shape[1])

    @property
    def determined(self) -> bool:
        return self.gap_ratio >= MIN_GAP and self.coverage == self.d

    def tail(self, count: int = 8) -> list[float]:
        """The smallest ``count`` singular values, largest first."""
        return [float(s) for s in self.singular_values[-count:]]


def assemble(pairs) -> LyapunovSystem:
    """Build and decompose the constraint system for ``pairs``."""
    pairs = list(pairs)
    if not pairs:
        raise UnderdeterminedError("no complementarity pairs given")
    d = pairs[0].x.shape[0]
    if len(pairs) < ROWS_PER_ENTRY * d * d:
        raise UnderdeterminedError(
            f"{len(pairs)} pairs for d = {d}; at least {ROWS_PER_ENTRY * d * d} are required"
        )
    X = np.array([pr.x for pr in pairs])
    Y = np.array([pr.y for pr in pairs])
    rows = np.einsum("ki,kj->kij", Y, X).reshape(len(pairs), d * d)
    norms = np.linalg.norm(rows, axis=1)
    rows = rows / np.where(norms > 0, norms, 1.0)[:, None]

    _, sv, vt = np.linalg.svd(rows, full_matrices=True)
    smax = sv[0] if sv.size else 0.0
    nullity = int(np.count_nonzero(sv <= ZERO_THRESHOLD * smax)) + (d * d - sv.size)
    kept = d * d - nullity
    if nullity == 0 or kept == 0:
        gap = math.inf
    else:
        dropped = sv[kept] if kept < sv.size else 0.0
        gap = math.inf if dropped == 0 else float(sv[kept - 1] / dropped)
    coverage = min(np.linalg.matrix_rank(X), np.linalg.matrix_rank(Y))
    return LyapunovSystem(rows, sv, nullity, gap, int(coverage), vt[kept:].reshape(-1, d, d))


def _warn_conditioning(spec):
    if spec.kind == "pcone" and (1 < spec.p <= 1.05 or 20 <= spec.p < math.inf):
        warnings.warn(
            f"p = {spec.p:g} is close to 1 or large; gradient-based boundary pairs are "
            "poorly conditioned",
            ConditioningWarning,
            stacklevel=3,
        )


def lyapunov_rank(spec: ConeSpec, pairs: int | None = None, seed: int = DEFAULT_SEED):
    """Return ``(rank, system)`` for a p-cone, Lorentz cone or orthant.

    Raises :class:`AmbiguousRankError` when the singular value gap is below
    ``1e3`` or the sampled pairs do not span the space.
    """
    d = spec.dim
    count = DEFAULT_PAIRS_PER_ENTRY * d * d if pairs is None else int(pairs)
    _warn_conditioning(spec)
    system = assemble(sample_pairs(spec, count, seed))
    if system.coverage < d:
        raise AmbiguousRankError(
            f"sampled pairs span only {system.coverage} of {d} dimensions", system
        )
    if system.gap_ratio < MIN_GAP:
        raise AmbiguousRankError(
            f"singular value gap {system.gap_ratio:.3g} below {MIN_GAP:g}", system
        )
    return system.nullity, system


def lorentz_rank_formula(n: int) -> int:
    return (n * n - n + 2) // 2


# -- certificate ------------------------------------------------------------------


class Verdict(str, Enum):
    NOT_HOMOGENEOUS = "NotHomogeneous"
    HOMOGENEOUS = "Homogeneous"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass
class NonHomogeneityReport:
    p: float
    n: int
    strictly_convex: bool
    lyap_rank_pcone: int | None
    lyap_rank_lorentz: int | None
    verdict: Verdict
    reasoning: list[str]
    gap_ratios: dict = field(default_factory=dict)


def nonhomogeneity_report(p, n: int, seed: int = DEFAULT_SEED, pairs: int | None = None,
                          samples: int = 20_000) -> NonHomogeneityReport:
    """Decide homogeneity of ``SOC_p^n`` from strict convexity and Lyapunov ranks.

    Chain for ``n >= 3``, ``p != 2``: the cone is strictly convex, so if it
    were homogeneous its rank would be at most 2 and it would be linearly
    isomorphic to a Lorentz cone of the same dimension (the other rank <= 2
    cones have dimension <= 2).  Differing Lyapunov ranks rule that out.
    """
    p = _pcone.parse_p(p)
    spec = PConeSpec(n, p)
    why = []
    sc = _pcone.strict_convexity(spec, samples=samples, seed=seed)
    why.append(
        f"strict convexity of {spec}: {sc.verdict} "
        f"(sampled flat pairs: {sc.sampled_hits} in {sc.trials})"
    )

    ranks, gaps = {}, {}
    for label, cs in (("pcone", ConeSpec.pcone(p, n)), ("lorentz", ConeSpec.lorentz(n))):
        try:
            rank, system = lyapunov_rank(cs, pairs, seed)
        except AmbiguousRankError as exc:
            why.append(f"Lyapunov rank of {cs} undetermined: {exc}")
            ranks[label] = None
            if exc.system is not None:
                gaps[label] = exc.system.gap_ratio
            continue
        ranks[label] = rank
        gaps[label] = system.gap_ratio
        why.append(f"Lyapunov rank of {cs} = {rank} (gap ratio {system.gap_ratio:.3g})")

    rp, rl = ranks["pcone"], ranks["lorentz"]
    if n == 2:
        why.append("n = 2: the cone has the two extreme rays (1, 1) and (1, -1) and is "
                   "linearly isomorphic to the nonnegative quadrant")
        verdict = Verdict.HOMOGENEOUS
    elif p == 2:
        why.append("p = 2: the cone is a Lorentz cone")
        verdict = Verdict.HOMOGENEOUS
    elif not sc.verdict:
        why.append("not strictly convex: the rank <= 2 argument does not apply")
        verdict = Verdict.INCONCLUSIVE
    elif rp is None or rl is None:
        verdict = Verdict.INCONCLUSIVE
    elif rp != rl:
        why.append(
            "strictly convex and homogeneous would force rank <= 2, hence a Lorentz cone "
            f"of dimension {n}; Lyapunov ranks {rp} != {rl} rule out any isomorphism"
        )
        verdict = Verdict.NOT_HOMOGENEOUS
    else:
        why.append("Lyapunov ranks agree; no obstruction found")
        verdict = Verdict.INCONCLUSIVE
    return NonHomogeneityReport(p, n, sc.verdict, rp, rl, verdict, why, gaps)
