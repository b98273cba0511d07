import json
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from homcone.builtins import change_basis, orthant, spin, vinberg
from homcone.descriptor import (
    dumps_algebra,
    dumps_element,
    loads_algebra,
    loads_element,
    parse_descriptor,
    parse_element,
)
from homcone.errors import DescriptorParseError

from conftest import builtin_algebras

ROOT = Path(__file__).resolve().parents[1]


def schema(name):
    return json.loads((ROOT / "schemas" / f"{name}.schema.json").read_text())


@pytest.mark.parametrize("alg", builtin_algebras(), ids=lambda a: a.name)
def test_round_trip_is_exact(alg):
    text = dumps_algebra(alg)
    jsonschema.validate(json.loads(text), schema("algebra"))
    back = loads_algebra(text)
    assert back == alg and back.name == alg.name


def test_round_trip_irrational_coefficients():
    rng = np.random.default_rng(0)
    P = rng.standard_normal((2, 2)) + 2 * np.eye(2)
    alg = change_basis(spin(2), {(1, 2): P, (2, 1): np.linalg.inv(P).T})
    assert loads_algebra(dumps_algebra(alg)) == alg


def test_shipped_fixture():
    alg = parse_descriptor(ROOT / "data" / "spin3.talg")
    assert alg.rank == 2 and alg.block_dims[(1, 2)] == 3
    assert alg == spin(3)
    el = parse_element(ROOT / "data" / "spin1_outside.json", spin(1))
    np.testing.assert_array_equal(el.to_vector(), [1, 2, 2, 1])
    jsonschema.validate(json.loads((ROOT / "data" / "spin1_outside.json").read_text()), schema("element"))


def test_element_round_trip():
    rng = np.random.default_rng(1)
    alg = vinberg()
    a = alg.from_vector(rng.standard_normal(alg.dim))
    back = loads_element(dumps_element(a), alg)
    np.testing.assert_array_equal(back.to_vector(), a.to_vector())
    assert not loads_element(dumps_element(alg.zero()), alg).to_vector().any()


def edit(alg, fn):
    doc = json.loads(dumps_algebra(alg))
    fn(doc)
    return json.dumps(doc)


def test_undeclared_block_rejected():
    def add(doc):
        doc["products"].append({"i": 2, "j": 3, "k": 3, "a_idx": 1, "b_idx": 1, "out_idx": 1, "coeff": 1.0})
    with pytest.raises(DescriptorParseError, match="not declared") as info:
        loads_algebra(edit(vinberg(), add))
    assert info.value.location.startswith("products[")


def test_diagonal_dimension_cites_axiom_i():
    def widen(doc):
        doc["blocks"][0]["dim"] = 2
    with pytest.raises(DescriptorParseError, match="axiom \\(i\\)"):
        loads_algebra(edit(orthant(2), widen))


def test_duplicate_product_rejected():
    def dup(doc):
        doc["products"].append(dict(doc["products"][0]))
    with pytest.raises(DescriptorParseError, match="duplicate"):
        loads_algebra(edit(spin(1), dup))


def test_index_out_of_range():
    def bad(doc):
        doc["products"][0]["a_idx"] = 5
    with pytest.raises(DescriptorParseError, match="out of range") as info:
        loads_algebra(edit(spin(1), bad))
    assert info.value.location == "products[0].a_idx"


def test_json_error_reports_line():
    text = dumps_algebra(spin(1)).replace('"rank": 2,', '"rank": 2')
    with pytest.raises(DescriptorParseError) as info:
        loads_algebra(text)
    assert info.value.location.startswith("line ")


def test_bad_involution_matrix_size():
    def bad(doc):
        doc["involution"][1]["matrix"] = [1.0, 0.0]
    with pytest.raises(DescriptorParseError, match="matrix"):
        loads_algebra(edit(spin(1), bad))


def test_element_errors():
    alg = vinberg()
    with pytest.raises(DescriptorParseError, match="does not exist"):
        loads_element('{"blocks": [{"i": 2, "j": 3, "coords": [1]}]}', alg)
    with pytest.raises(DescriptorParseError, match="coords"):
        loads_element('{"blocks": [{"i": 1, "j": 2, "coords": [1, 2]}]}', alg)
