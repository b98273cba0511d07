import numpy as np
import pytest

from homcone.builtins import orthant, spin, vinberg


def builtin_algebras(max_orthant=6, max_spin=8):
    algs = [orthant(r) for r in range(1, max_orthant + 1)]
    algs += [spin(m) for m in range(0, max_spin + 1)]
    algs.append(vinberg())
    return algs


@pytest.fixture(scope="session")
def builtins_all():
    return builtin_algebras()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
