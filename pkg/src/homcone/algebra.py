"""Bigraded matrix algebras with involution and the T-algebra axiom checker.

An algebra of rank ``r`` is stored block by block.  Block ``(i, j)`` (1-based,
as in the usual generalized-matrix notation) is a real vector space of
dimension ``n_ij`` with a fixed basis, and

* ``products[(i, j, k)]`` is an ``n_ij x n_jk x n_ik`` array ``T`` such that
  ``basis_ij[a] * basis_jk[b] = sum_c T[a, b, c] basis_ik[c]``;
* ``involution[(i, j)]`` is an ``n_ij x n_ji`` array ``M`` whose row ``a``
  holds the coordinates in block ``(j, i)`` of ``basis_ij[a]^*``.

Products between blocks whose inner indices differ are identically zero and
are never stored.  Blocks of dimension zero are absent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .errors import AlgebraMismatchError, MalformedAlgebraError

Block = tuple[int, int]
Triple = tuple[int, int, int]

AXIOMS = ("i", "ii", "iii", "iv", "v", "vi", "vii", "involution")
DEFAULT_AXIOM_TOL = 1e-9


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


class BigradedAlgebra:
    """Finite-dimensional real matrix algebra with bigradation and involution.

    Parameters
    ----------
    rank : int
        Number of diagonal blocks ``r >= 1``.
    block_dims : mapping
        ``(i, j) -> n_ij``.  Missing blocks have dimension zero.
    products : mapping
        ``(i, j, k) -> array (n_ij, n_jk, n_ik)``.  Missing triples are zero.
    involution : mapping
        ``(i, j) -> array (n_ij, n_ji)`` for every block of positive dimension.
    name : str
        Free-form label used in reports.

    Instances are immutable.  Construction enforces the structural invariants
    (``n_ii = 1``, ``n_ij = n_ji``, shapes, involutivity) and raises
    :class:`MalformedAlgebraError` on violation.  The T-algebra axioms are a
    separate question, answered by :func:`check_axioms`.
    """

    def __init__(self, rank, block_dims, products, involution, name="custom"):
        rank = int(rank)
        if rank < 1:
            raise MalformedAlgebraError(f"rank must be >= 1, got {rank}")
        self.rank = rank
        self.name = name

        dims = {}
        for (i, j), n in dict(block_dims).items():
            self._check_index((i, j), "block_dims")
            n = int(n)
            if n < 0:
                raise MalformedAlgebraError(f"block ({i},{j}) has negative dimension")
            dims[(i, j)] = n
        for i, j in itertools.product(range(1, rank + 1), repeat=2):
            dims.setdefault((i, j), 0)
        for i in range(1, rank + 1):
            if dims[(i, i)] != 1:
                raise MalformedAlgebraError(
                    f"block ({i},{i}) has dimension {dims[(i, i)]}; axiom (i) "
                    "requires each diagonal block to be a copy of the reals"
                )
        for i, j in itertools.combinations(range(1, rank + 1), 2):
            if dims[(i, j)] != dims[(j, i)]:
                raise MalformedAlgebraError(
                    f"blocks ({i},{j}) and ({j},{i}) differ in dimension "
                    f"({dims[(i, j)]} vs {dims[(j, i)]})"
                )
        self.block_dims: Mapping[Block, int] = dims
        self._blocks = [b for b in sorted(dims) if dims[b] > 0]

        prods = {}
        for key, tensor in dict(products).items():
            if len(key) != 3:
                raise MalformedAlgebraError(f"product key {key} is not a triple")
            i, j, k = key
            self._check_index((i, j), "products")
            self._check_index((j, k), "products")
            shape = (dims[(i, j)], dims[(j, k)], dims[(i, k)])
            tensor = np.asarray(tensor, dtype=float)
            if tensor.shape != shape:
                raise MalformedAlgebraError(
                    f"product ({i},{j},{k}) has shape {tensor.shape}, expected {shape}"
                )
            if 0 in shape:
                continue
            prods[(i, j, k)] = _frozen(tensor)
        for i, j, k in itertools.product(range(1, rank + 1), repeat=3):
            shape = (dims[(i, j)], dims[(j, k)], dims[(i, k)])
            if 0 not in shape:
                prods.setdefault((i, j, k), _frozen(np.zeros(shape)))
        self.products: Mapping[Triple, np.ndarray] = prods

        invs = {}
        for (i, j), mat in dict(involution).items():
            self._check_index((i, j), "involution")
            if dims[(i, j)] == 0:
                continue
            mat = np.asarray(mat, dtype=float)
            shape = (dims[(i, j)], dims[(j, i)])
            if mat.shape != shape:
                raise MalformedAlgebraError(
                    f"involution on ({i},{j}) has shape {mat.shape}, expected {shape}"
                )
            invs[(i, j)] = _frozen(mat)
        for blk in self.blocks:
            if blk not in invs:
                raise MalformedAlgebraError(f"involution missing for block {blk}")
        for i, j in self.blocks:
            twice = invs[(i, j)] @ invs[(j, i)]
            err = np.max(np.abs(twice - np.eye(dims[(i, j)])))
            if err > 1e-9:
                raise MalformedAlgebraError(
                    f"involution is not involutive on block ({i},{j}) "
                    f"(max deviation {err:.3g})"
                )
        self.involution: Mapping[Block, np.ndarray] = invs

        # Value of rho_i on the basis vector of A_ii.  Since b*b = c b and rho is
        # multiplicative, rho_i(b) = c; zero means A_ii is not isomorphic to R.
        self.rho = tuple(float(prods[(i, i, i)][0, 0, 0]) for i in range(1, rank + 1))

    def _check_index(self, blk, where):
        for idx in blk:
            if not (isinstance(idx, (int, np.integer)) and 1 <= idx <= self.rank):
                raise MalformedAlgebraError(
                    f"{where}: index {idx} out of range 1..{self.rank}"
                )

    # -- structure ---------------------------------------------------------

    @property
    def blocks(self) -> list[Block]:
        """Blocks of positive dimension in row-major order."""
        return list(self._blocks)

    @property
    def dim(self) -> int:
        return sum(self.block_dims.values())

    def offdiag_dim(self, i, j) -> int:
        return self.block_dims[(i, j)]

    def __repr__(self):
        return f"BigradedAlgebra(name={self.name!r}, rank={self.rank}, dim={self.dim})"

    def __eq__(self, other):
        if not isinstance(other, BigradedAlgebra):
            return NotImplemented
        if self.rank != other.rank or dict(self.block_dims) != dict(other.block_dims):
            return False
        if self.products.keys() != other.products.keys():
            return False
        if not all(np.array_equal(self.products[k], other.products[k]) for k in self.products):
            return False
        return all(
            np.array_equal(self.involution[k], other.involution[k]) for k in self.involution
        )

    __hash__ = object.__hash__

    # -- element constructors ------------------------------------------------

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def element(self, blocks) -> AlgebraElement:
        return AlgebraElement(self, blocks)

    def unit(self, i) -> AlgebraElement:
        """The unit ``e_i`` of the diagonal block ``A_ii``."""
        c = self.rho[i - 1]
        if c == 0.0:
            raise MalformedAlgebraError(f"A_{i}{i} has zero square; no unit exists")
        return AlgebraElement(self, {(i, i): [1.0 / c]})

    def identity(self) -> AlgebraElement:
        """``e_1 + ... + e_r``."""
        return AlgebraElement(self, {(i, i): [1.0 / self.rho[i - 1]] for i in range(1, self.rank + 1)})

    def basis_element(self, i, j, idx) -> AlgebraElement:
        """Basis vector ``idx`` (0-based) of block ``(i, j)``."""
        vec = np.zeros(self.block_dims[(i, j)])
        vec[idx] = 1.0
        return AlgebraElement(self, {(i, j): vec})

    def diagonal(self, scalars) -> AlgebraElement:
        """``sum_i s_i e_i`` for real scalars ``s_i``."""
        return AlgebraElement(
            self, {(i, i): [s / self.rho[i - 1]] for i, s in enumerate(scalars, start=1)}
        )

    def from_vector(self, vec) -> AlgebraElement:
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (self.dim,):
            raise ValueError(f"expected vector of length {self.dim}, got {vec.shape}")
        blocks, pos = {}, 0
        for blk in self.blocks:
            n = self.block_dims[blk]
            blocks[blk] = vec[pos:pos + n]
            pos += n
        return AlgebraElement(self, blocks)


@dataclass(eq=False)
class AlgebraElement:
    """Element of a :class:`BigradedAlgebra` as a generalized matrix.

    ``blocks`` maps ``(i, j)`` to the coordinate vector of ``a_ij``.  After
    construction every block of positive dimension is present (zeros where
    the input omitted it).
    """

    algebra: BigradedAlgebra
    blocks: dict = field(default_factory=dict)

    def __post_init__(self):
        alg = self.algebra
        given = dict(self.blocks)
        full = {}
        for blk, coords in given.items():
            if blk not in alg.block_dims:
                raise ValueError(f"block {blk} does not exist in rank-{alg.rank} algebra")
            n = alg.block_dims[blk]
            coords = np.array(coords, dtype=float).reshape(-1)
            if coords.shape != (n,):
                raise ValueError(f"block {blk} needs {n} coordinates, got {coords.shape[0]}")
            if n:
                full[blk] = coords
        self.blocks = {
            blk: full[blk] if blk in full else np.zeros(alg.block_dims[blk]) for blk in alg._blocks
        }

    def block(self, i, j) -> np.ndarray:
        return self.blocks.get((i, j), np.zeros(0))

    def rho(self, i) -> float:
        """``rho_i(a_ii)``."""
        return self.algebra.rho[i - 1] * float(self.blocks[(i, i)][0])

    def to_vector(self) -> np.ndarray:
        return np.concatenate(list(self.blocks.values()))

    def norm(self) -> float:
        """Euclidean norm of the coordinate vector (basis dependent)."""
        return float(np.linalg.norm(self.to_vector()))

    def copy(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, {b: v.copy() for b, v in self.blocks.items()})

    def _combine(self, other, fn):
        _same_algebra(self, other)
        return AlgebraElement(self.algebra, {b: fn(v, other.blocks[b]) for b, v in self.blocks.items()})

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __neg__(self):
        return AlgebraElement(self.algebra, {b: -v for b, v in self.blocks.items()})

    def __mul__(self, scalar):
        if isinstance(scalar, AlgebraElement):
            raise TypeError("use multiply(a, b) or a @ b for the algebra product")
        return AlgebraElement(self.algebra, {b: scalar * v for b, v in self.blocks.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __matmul__(self, other):
        return multiply(self, other)

    @property
    def star(self) -> AlgebraElement:
        return involute(self)

    def __repr__(self):
        parts = ", ".join(
            f"({i},{j}): {np.array2string(v, precision=4)}" for (i, j), v in self.blocks.items()
        )
        return f"AlgebraElement({self.algebra.name}; {parts})"


def _same_algebra(a, b):
    if a.algebra is not b.algebra and a.algebra != b.algebra:
        raise AlgebraMismatchError("operands belong to different algebras")


def block_product(alg, i, j, k, x, y) -> np.ndarray:
    """Coordinates in ``A_ik`` of ``x * y`` for ``x in A_ij``, ``y in A_jk``."""
    T = alg.products.get((i, j, k))
    if T is None:
        return np.zeros(alg.block_dims[(i, k)])
    n1, n2, n3 = T.shape
    return y @ (x @ T.reshape(n1, n2 * n3)).reshape(n2, n3)


def block_star(alg, i, j, x) -> np.ndarray:
    """Coordinates in ``A_ji`` of ``x^*`` for ``x in A_ij``."""
    M = alg.involution.get((i, j))
    if M is None:
        return np.zeros(0)
    return x @ M


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Algebra product, ``(ab)_ik = sum_j a_ij b_jk``."""
    _same_algebra(a, b)
    alg = a.algebra
    out = {blk: np.zeros(alg.block_dims[blk]) for blk in alg.blocks}
    for (i, j, k), T in alg.products.items():
        x, y = a.blocks[(i, j)], b.blocks[(j, k)]
        if not (x.any() and y.any()):
            continue
        n1, n2, n3 = T.shape
        out[(i, k)] += y @ (x @ T.reshape(n1, n2 * n3)).reshape(n2, n3)
    return AlgebraElement(alg, out)


def involute(a: AlgebraElement) -> AlgebraElement:
    """Involution, ``(a^*)_ji = (a_ij)^*``."""
    alg = a.algebra
    return AlgebraElement(
        alg, {(j, i): a.blocks[(i, j)] @ alg.involution[(i, j)] for (i, j) in alg.blocks}
    )


def trace(a: AlgebraElement) -> float:
    return float(sum(a.rho(i) for i in range(1, a.algebra.rank + 1)))


def inner(a: AlgebraElement, b: AlgebraElement) -> float:
    """``tr(a^* b)``; only the diagonal blocks of the product are formed."""
    _same_algebra(a, b)
    alg = a.algebra
    total = 0.0
    for i, j in alg.blocks:
        # (a^*)_ij b_ji contributes to the (i, i) block
        x = a.blocks[(j, i)] @ alg.involution[(j, i)]
        T = alg.products.get((i, j, i))
        if T is None:
            continue
        total += alg.rho[i - 1] * float(block_product(alg, i, j, i, x, b.blocks[(j, i)])[0])
    return total


# -- axiom verification -------------------------------------------------------


@dataclass
class AxiomResult:
    passed: bool
    violation: float
    witness: dict | None = None


@dataclass
class AxiomReport:
    """Verdict per axiom.

    ``results`` maps axiom labels ``"i"`` ... ``"vii"`` and ``"involution"``
    (the anti-automorphism law ``(ab)^* = b^* a^*``) to :class:`AxiomResult`.
    Witness indices are 1-based.  For the identity axioms ``violation`` is the
    largest residual over basis tuples; for axiom (v) it is
    ``max(0, tol - lambda_min)`` over the Gram matrices of ``u -> rho_i(u u^*)``.
    """

    tol: float
    results: dict

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def failed(self) -> list[str]:
        return [k for k, r in self.results.items() if not r.passed]

    def __getitem__(self, axiom):
        return self.results[axiom]

    def summary(self) -> str:
        lines = []
        for name in AXIOMS:
            r = self.results[name]
            status = "pass" if r.passed else "FAIL"
            extra = f"  witness={r.witness}" if (r.witness and not r.passed) else ""
            lines.append(f"axiom {name:>10}: {status}  violation={r.violation:.3e}{extra}")
        return "\n".join(lines)


class _Worst:
    """Track the largest residual and where it happened."""

    def __init__(self):
        self.value = 0.0
        self.witness = None

    def update(self, residual, blocks):
        residual = np.abs(residual)
        if residual.size == 0:
            return
        idx = np.unravel_index(int(np.argmax(residual)), residual.shape)
        val = float(residual[idx])
        if val > self.value:
            self.value = val
            self.witness = {"blocks": blocks, "basis": tuple(int(t) + 1 for t in idx)}


def _assoc_residual(alg, i, j, k, l):
    """``a_ij(b_jk c_kl) - (a_ij b_jk) c_kl`` on all basis triples."""
    P = alg.products
    n_il = alg.block_dims[(i, l)]
    shape = (alg.block_dims[(i, j)], alg.block_dims[(j, k)], alg.block_dims[(k, l)], n_il)
    if 0 in shape:
        return None
    zero = np.zeros
    if (j, k, l) in P and (i, j, l) in P:
        lhs = np.einsum("bcm,amo->abco", P[(j, k, l)], P[(i, j, l)])
    else:
        lhs = zero(shape)
    if (i, j, k) in P and (i, k, l) in P:
        rhs = np.einsum("abm,mco->abco", P[(i, j, k)], P[(i, k, l)])
    else:
        rhs = zero(shape)
    return lhs - rhs


def _axiom_vii_residual(alg, i, j, k, l):
    """``a_ij(b_jk b_lk^*) - (a_ij b_jk) b_lk^*`` as a bilinear form in the two b-blocks.

    When ``j == l`` both b-arguments come from the same block, so only the
    symmetric part of the form has to vanish.
    """
    P, M = alg.products, alg.involution
    d = alg.block_dims
    shape = (d[(i, j)], d[(j, k)], d[(l, k)], d[(i, l)])
    if 0 in shape:
        return None
    # x_b * (y_c)^* in A_jl
    if (j, k, l) in P:
        xy = np.einsum("bmo,cm->bco", P[(j, k, l)], M[(l, k)])
        lhs = np.einsum("bcm,amo->abco", xy, P[(i, j, l)]) if (i, j, l) in P else np.zeros(shape)
    else:
        lhs = np.zeros(shape)
    if (i, j, k) in P and (i, k, l) in P:
        rhs = np.einsum("abm,mdo,cd->abco", P[(i, j, k)], P[(i, k, l)], M[(l, k)])
    else:
        rhs = np.zeros(shape)
    res = lhs - rhs
    if j == l:
        res = 0.5 * (res + res.transpose(0, 2, 1, 3))
    return res


def gram_matrix(alg: BigradedAlgebra, i: int, j: int) -> np.ndarray:
    """Matrix of ``(u, v) -> rho_i(u v^*)`` on the basis of ``A_ij``."""
    n = alg.block_dims[(i, j)]
    if n == 0:
        return np.zeros((0, 0))
    T = alg.products[(i, j, i)]
    # basis_a * (basis_b)^*, coordinates in A_ii
    G = np.einsum("amo,bm->abo", T, alg.involution[(i, j)])[:, :, 0]
    return alg.rho[i - 1] * G


def check_axioms(alg: BigradedAlgebra, tol: float = DEFAULT_AXIOM_TOL) -> AxiomReport:
    """Verify the seven T-algebra axioms and the involution law on basis tuples.

    Identity axioms are multilinear, so checking every tuple of basis vectors
    settles them exactly (up to ``tol``).  Axiom (v) is checked as positive
    definiteness of ``u -> rho_i(u u^*)`` on each block ``A_ij``; with axiom
    (iii) this is the same as the printed ``rho_i(u^* u)`` form read in
    ``A_jj``.
    """
    r = alg.rank
    d = alg.block_dims
    P, M = alg.products, alg.involution
    idx = range(1, r + 1)
    results = {}

    # (i): A_ii closed under the product with nonzero square
    bad = [i for i in idx if abs(alg.rho[i - 1]) <= tol]
    results["i"] = AxiomResult(
        passed=not bad,
        violation=1.0 if bad else 0.0,
        witness={"blocks": (bad[0], bad[0])} if bad else None,
    )

    # (ii): e_i a_ij = a_ij and a_ji e_i = a_ji
    worst = _Worst()
    for i in idx:
        c = alg.rho[i - 1]
        if c == 0.0:
            continue
        for j in idx:
            n = d[(i, j)]
            if n:
                worst.update(P[(i, i, j)][0] / c - np.eye(n), (i, i, j))
                worst.update(P[(j, i, i)][:, 0, :] / c - np.eye(n), (j, i, i))
    results["ii"] = AxiomResult(worst.value <= tol and not bad, worst.value, worst.witness)

    # (iii): rho_i(a_ij b_ji) = rho_j(b_ji a_ij)
    worst = _Worst()
    for i, j in itertools.product(idx, repeat=2):
        if d[(i, j)]:
            lhs = alg.rho[i - 1] * P[(i, j, i)][:, :, 0]
            rhs = alg.rho[j - 1] * P[(j, i, j)][:, :, 0].T
            worst.update(lhs - rhs, (i, j, i))
    results["iii"] = AxiomResult(worst.value <= tol, worst.value, worst.witness)

    # (iv): a_ij(b_jk c_ki) = (a_ij b_jk) c_ki for all i, j, k
    worst = _Worst()
    for i, j, k in itertools.product(idx, repeat=3):
        res = _assoc_residual(alg, i, j, k, i)
        if res is not None:
            worst.update(res, (i, j, k, i))
    results["iv"] = AxiomResult(worst.value <= tol, worst.value, worst.witness)

    # (v): rho_i(u u^*) > 0 for u != 0
    lam_min, where = np.inf, None
    for i, j in alg.blocks:
        G = gram_matrix(alg, i, j)
        lam = float(np.linalg.eigvalsh(0.5 * (G + G.T))[0])
        if lam < lam_min:
            lam_min, where = lam, (i, j)
    violation = max(0.0, tol - lam_min)
    results["v"] = AxiomResult(
        passed=lam_min > tol,
        violation=violation,
        witness={"blocks": where, "lambda_min": lam_min} if violation > 0 else None,
    )

    # (vi): associativity on ascending index chains
    worst = _Worst()
    for i, j, k, l in itertools.combinations_with_replacement(idx, 4):
        res = _assoc_residual(alg, i, j, k, l)
        if res is not None:
            worst.update(res, (i, j, k, l))
    results["vi"] = AxiomResult(worst.value <= tol, worst.value, worst.witness)

    # (vii): a_ij(b_jk b_lk^*) = (a_ij b_jk) b_lk^*, i <= j <= k, l <= k
    worst = _Worst()
    for i, j, k in itertools.combinations_with_replacement(idx, 3):
        for l in range(1, k + 1):
            res = _axiom_vii_residual(alg, i, j, k, l)
            if res is not None:
                worst.update(res, (i, j, k, l))
    results["vii"] = AxiomResult(worst.value <= tol, worst.value, worst.witness)

    # (ab)^* = b^* a^* on basis pairs
    worst = _Worst()
    for (i, j, k), T in P.items():
        lhs = T @ M[(i, k)]
        rhs = np.einsum("bm,an,mno->abo", M[(j, k)], M[(i, j)], P[(k, j, i)]) if (k, j, i) in P else 0.0 * lhs
        worst.update(lhs - rhs, (i, j, k))
    results["involution"] = AxiomResult(worst.value <= tol, worst.value, worst.witness)

    return AxiomReport(tol=tol, results=results)


def iter_basis(alg: BigradedAlgebra) -> Iterator[tuple[Block, int, AlgebraElement]]:
    for blk in alg.blocks:
        for a in range(alg.block_dims[blk]):
            yield blk, a, alg.basis_element(blk[0], blk[1], a)
