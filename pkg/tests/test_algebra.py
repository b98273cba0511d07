import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homcone.algebra import (
    AlgebraElement,
    BigradedAlgebra,
    check_axioms,
    gram_matrix,
    inner,
    involute,
    iter_basis,
    multiply,
    trace,
)
from homcone.builtins import build_builtin, change_basis, orthant, spin, vinberg
from homcone.errors import AlgebraMismatchError, MalformedAlgebraError

from conftest import builtin_algebras


def close(a, b, tol=1e-12):
    return np.allclose(a.to_vector(), b.to_vector(), atol=tol, rtol=0)


def random_element(alg, rng):
    return alg.from_vector(rng.standard_normal(alg.dim))


def perturbed(alg, key, index, factor=None, delta=None):
    T = np.array(alg.products[key])
    if factor is not None:
        T[index] *= factor
    else:
        T[index] += delta
    products = dict(alg.products)
    products[key] = T
    return BigradedAlgebra(alg.rank, alg.block_dims, products, alg.involution, name="perturbed")


# -- products, involution, trace, inner ------------------------------------------


def test_units_multiply():
    A = spin(2)
    e1, e2 = A.unit(1), A.unit(2)
    u = A.basis_element(1, 2, 0)
    assert close(e1 @ e1, e1)
    assert close(e1 @ e2, A.zero())
    assert close(e1 @ u, u)
    assert close(u @ e2, u)


def test_multiply_rejects_foreign_elements():
    with pytest.raises(AlgebraMismatchError):
        multiply(spin(1).unit(1), spin(2).unit(1))


def test_involution_examples(rng):
    A = vinberg()
    for i in (1, 2, 3):
        assert close(involute(A.unit(i)), A.unit(i))
    a = random_element(A, rng)
    assert close(involute(involute(a)), a)
    assert close(involute(A.zero()), A.zero())


def test_trace_examples():
    A = orthant(4)
    assert trace(A.identity()) == pytest.approx(4.0)
    assert trace(A.unit(1)) == 1.0
    assert trace(spin(3).basis_element(1, 2, 1)) == 0.0


def test_inner_examples(rng):
    A = vinberg()
    for i in range(1, 4):
        for j in range(1, 4):
            assert inner(A.unit(i), A.unit(j)) == pytest.approx(float(i == j))
    # positive on every basis element, zero against zero
    for alg in (spin(3), vinberg(), spin(2, scale=3.0)):
        for _, _, b in iter_basis(alg):
            assert inner(b, b) > 0
        b = random_element(alg, rng)
        assert inner(alg.zero(), b) == 0.0


def test_bigradation_on_basis():
    A = vinberg()
    for (i, j), _, x in iter_basis(A):
        for (k, l), _, y in iter_basis(A):
            if j != k:
                assert not multiply(x, y).to_vector().any()


@pytest.mark.parametrize("alg", builtin_algebras(4, 4), ids=lambda a: a.name)
def test_anti_automorphism_and_symmetry(alg):
    rng = np.random.default_rng(7)
    for _ in range(20):
        a, b = random_element(alg, rng), random_element(alg, rng)
        assert close(involute(a @ b), involute(b) @ involute(a), 1e-12)
        assert abs(inner(a, b) - inner(b, a)) <= 1e-12 * (1 + a.norm() * b.norm())


def test_diagonal_blocks_are_multiples_of_units(rng):
    A = vinberg()
    a = random_element(A, rng)
    for i in range(1, 4):
        diag = AlgebraElement(A, {(i, i): a.blocks[(i, i)]})
        assert close(diag, a.rho(i) * A.unit(i))


@settings(max_examples=40, deadline=None)
@given(
    m=st.integers(0, 4),
    coeffs=st.lists(st.floats(-10, 10, allow_nan=False), min_size=24, max_size=24),
)
def test_inner_is_symmetric_bilinear_and_positive(m, coeffs):
    A = spin(m)
    a = A.from_vector(np.array(coeffs[: A.dim]))
    b = A.from_vector(np.array(coeffs[-A.dim:]))
    assert inner(a, b) == pytest.approx(inner(b, a), abs=1e-9)
    assert inner(2.0 * a, b) == pytest.approx(2.0 * inner(a, b), abs=1e-9)
    assert inner(a, a) >= 0.0


# -- axioms -----------------------------------------------------------------------


@pytest.mark.parametrize("alg", builtin_algebras(), ids=lambda a: a.name)
def test_builtins_pass_all_axioms(alg):
    report = check_axioms(alg, 1e-12)
    assert report.passed, report.summary()
    assert all(r.violation >= 0 for r in report.results.values())


def test_scaled_coefficient_breaks_associativity():
    bad = perturbed(spin(2), (1, 1, 2), (0, 0, 0), factor=1.1)
    report = check_axioms(bad)
    assert not report["iv"].passed
    assert report["iv"].violation > 0
    assert report["iv"].witness is not None


def test_scaled_pairing_coefficient_breaks_trace_symmetry():
    bad = perturbed(spin(2), (1, 2, 1), (0, 0, 0), factor=1.1)
    assert check_axioms(bad).failed() == ["iii"]


def test_negated_involution_breaks_positivity():
    A = spin(2)
    inv = dict(A.involution)
    inv[(1, 2)] = -inv[(1, 2)]
    inv[(2, 1)] = -inv[(2, 1)]
    bad = BigradedAlgebra(2, A.block_dims, A.products, inv)
    report = check_axioms(bad)
    assert report.failed() == ["v"]
    assert np.all(np.linalg.eigvalsh(gram_matrix(bad, 1, 2)) < 0)


@pytest.mark.parametrize("m", [1, 3, 5])
def test_small_perturbations_are_detected(m):
    A = spin(m)
    rng = np.random.default_rng(m)
    keys = sorted(A.products)
    for _ in range(10):
        key = keys[rng.integers(len(keys))]
        index = tuple(int(rng.integers(s)) for s in A.products[key].shape)
        bad = perturbed(A, key, index, delta=1e-6 * rng.choice([-1.0, 1.0]))
        assert not check_axioms(bad).passed, (key, index)


def test_change_of_basis_keeps_axioms():
    rng = np.random.default_rng(3)
    A = vinberg()
    P = {blk: np.eye(n) + 0.3 * rng.standard_normal((n, n)) for blk, n in A.block_dims.items()
         if n and blk[0] != blk[1]}
    assert check_axioms(change_basis(A, P)).passed
    assert check_axioms(spin(3, scale=0.5), 1e-12).passed


# -- structural validation --------------------------------------------------------


def test_diagonal_block_must_be_one_dimensional():
    with pytest.raises(MalformedAlgebraError, match="axiom \\(i\\)"):
        BigradedAlgebra(1, {(1, 1): 2}, {}, {(1, 1): np.eye(2)})


def test_block_dimensions_must_match_transpose():
    with pytest.raises(MalformedAlgebraError):
        BigradedAlgebra(2, {(1, 1): 1, (2, 2): 1, (1, 2): 2, (2, 1): 1}, {}, {})


def test_involution_must_be_involutive():
    A = spin(1)
    inv = dict(A.involution)
    inv[(1, 2)] = 2 * inv[(1, 2)]
    with pytest.raises(MalformedAlgebraError, match="involutive"):
        BigradedAlgebra(2, A.block_dims, A.products, inv)


def test_product_shape_checked():
    A = spin(2)
    products = dict(A.products)
    products[(1, 2, 1)] = np.zeros((2, 2, 2))
    with pytest.raises(MalformedAlgebraError, match="shape"):
        BigradedAlgebra(2, A.block_dims, products, A.involution)


def test_algebra_is_immutable():
    A = spin(1)
    with pytest.raises(ValueError):
        A.products[(1, 1, 1)][0, 0, 0] = 5.0


def test_builtin_shapes():
    assert spin(1).dim == 4
    assert spin(1).rank == 2
    V = vinberg()
    assert (V.rank, V.block_dims[(1, 2)], V.block_dims[(1, 3)], V.block_dims[(2, 3)]) == (3, 1, 1, 0)
    O = orthant(3)
    assert all(O.block_dims[(i, j)] == 0 for i in range(1, 4) for j in range(1, 4) if i != j)
    assert build_builtin("spin", m=4) == spin(4)
    with pytest.raises(ValueError):
        build_builtin("octonion")
    with pytest.raises(ValueError):
        orthant(0)
