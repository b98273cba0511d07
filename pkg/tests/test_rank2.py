import numpy as np
import pytest

from homcone.builtins import change_basis, orthant, spin, vinberg
from homcone.cone import factorize
from homcone.errors import DomainError, OutOfScopeError
from homcone.rank2 import (
    HermitianElement,
    Rank2Kind,
    classify,
    gram_factor,
    iso_inverse,
    iso_map,
)
from homcone.status import Status


def random_hermitian(alg, rng, scale=1.0):
    m = alg.block_dims[(1, 2)]
    v = scale * rng.standard_normal(m + 2)
    return iso_inverse(alg, v)


def test_gram_factor_examples():
    np.testing.assert_allclose(gram_factor(spin(1)), [[1.0]])
    np.testing.assert_allclose(gram_factor(spin(3)), np.eye(3))
    np.testing.assert_allclose(gram_factor(spin(1, scale=2.0)), [[2.0]])


def test_gram_factor_general_basis():
    rng = np.random.default_rng(2)
    P = rng.standard_normal((3, 3)) + 3 * np.eye(3)
    A = change_basis(spin(3), {(1, 2): P, (2, 1): P})
    Q = gram_factor(A)
    assert np.allclose(np.tril(Q, -1), 0) and np.all(np.diag(Q) > 0)
    np.testing.assert_allclose(Q.T @ Q, P @ P.T, atol=1e-12)


def test_gram_factor_requires_positive_form():
    A = spin(2)
    from homcone.algebra import BigradedAlgebra
    inv = {k: (-v if k[0] != k[1] else v) for k, v in A.involution.items()}
    with pytest.raises(DomainError, match="axiom"):
        gram_factor(BigradedAlgebra(2, A.block_dims, A.products, inv))


def test_iso_map_examples():
    A = spin(1)
    np.testing.assert_allclose(iso_map(A.identity()), [1, 0, 0])
    np.testing.assert_allclose(iso_map(A.unit(1)), [0.5, 0.5, 0])
    a = A.element({(1, 1): [2], (1, 2): [1], (2, 1): [1], (2, 2): [1]})
    np.testing.assert_allclose(iso_map(a), [1.5, 0.5, 1.0])


def test_iso_inverse_examples():
    A = spin(1)
    h = iso_inverse(A, [1, 0, 0])
    np.testing.assert_allclose(h.element.to_vector(), A.identity().to_vector())
    h = iso_inverse(A, [1, 1, 0])
    assert (h.alpha, h.beta) == (2.0, 0.0)
    assert factorize(h.element).status is Status.BOUNDARY


def test_non_hermitian_rejected():
    A = spin(1)
    with pytest.raises(DomainError):
        iso_map(A.element({(1, 2): [1.0]}))
    with pytest.raises(DomainError):
        HermitianElement(vinberg().identity())


@pytest.mark.parametrize("m", [1, 2, 5])
def test_round_trips_and_linearity(m):
    A = spin(m)
    rng = np.random.default_rng(m)
    Q = gram_factor(A)
    for _ in range(100):
        v = rng.standard_normal(m + 2)
        np.testing.assert_allclose(iso_map(iso_inverse(A, v, Q), Q), v, atol=1e-12)
        a = random_hermitian(A, rng)
        back = iso_inverse(A, iso_map(a, Q), Q)
        np.testing.assert_allclose(back.element.to_vector(), a.element.to_vector(), atol=1e-10)
        b = random_hermitian(A, rng)
        lam, mu = rng.standard_normal(2)
        combo = lam * a.element + mu * b.element
        lhs = iso_map(combo, Q)
        rhs = lam * iso_map(a, Q) + mu * iso_map(b, Q)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + np.max(np.abs(rhs)))


@pytest.mark.parametrize("m", [1, 2, 5])
def test_membership_agrees_with_lorentz_cone(m):
    A = spin(m)
    rng = np.random.default_rng(100 + m)
    Q = gram_factor(A)
    for _ in range(300):
        a = random_hermitian(A, rng)
        s = iso_map(a, Q)
        slack = s[0] - np.linalg.norm(s[1:])
        band = 1e-9 * (1 + a.element.norm())
        status = factorize(a.element).status
        if slack > band:
            assert status is Status.INTERIOR
        elif slack < -band:
            assert status is Status.OUTSIDE


def test_classify():
    from homcone.algebra import BigradedAlgebra
    ray = BigradedAlgebra(1, {(1, 1): 1}, {(1, 1, 1): np.ones((1, 1, 1))}, {(1, 1): np.ones((1, 1))})
    assert classify(ray).kind is Rank2Kind.RAY
    assert classify(orthant(1)).kind is Rank2Kind.RAY
    assert classify(orthant(2)).kind is Rank2Kind.ORTHANT2
    assert classify(spin(0)).kind is Rank2Kind.ORTHANT2
    c = classify(spin(3))
    assert str(c) == "Lorentz(5)" and c.lorentz_dim == 5
    assert c.matrix.shape == (5, 5)
    with pytest.raises(OutOfScopeError):
        classify(vinberg())
