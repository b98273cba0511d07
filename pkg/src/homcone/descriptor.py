"""Text descriptors for algebras (``.talg``) and their elements.

Both are JSON documents.  Block and basis indices are 1-based.  Writers
format every coefficient with 17 significant digits so that reading back
reproduces the algebra bit for bit.  See ``schemas/algebra.schema.json``
and ``schemas/element.schema.json`` for the layout.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .algebra import AlgebraElement, BigradedAlgebra
from .errors import DescriptorParseError, MalformedAlgebraError

FORMAT = "talgebra/1"
ELEMENT_FORMAT = "talgebra-element/1"


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite coefficient {x}")
    return format(x, ".17g")


def _float_list(values) -> str:
    return "[" + ", ".join(fmt_float(v) for v in values) + "]"


# -- writing ----------------------------------------------------------------------


def dumps_algebra(alg: BigradedAlgebra) -> str:
    lines = ["{", f'  "format": "{FORMAT}",', f"  \"name\": {json.dumps(alg.name)},",
             f'  "rank": {alg.rank},', '  "blocks": [']
    blocks = [f'    {{"i": {i}, "j": {j}, "dim": {alg.block_dims[(i, j)]}}}' for i, j in alg.blocks]
    lines.append(",\n".join(blocks))
    lines.append("  ],")
    lines.append('  "products": [')
    entries = []
    for (i, j, k), T in sorted(alg.products.items()):
        for a, b, c in zip(*np.nonzero(T)):
            entries.append(
                f'    {{"i": {i}, "j": {j}, "k": {k}, "a_idx": {a + 1}, "b_idx": {b + 1}, '
                f'"out_idx": {c + 1}, "coeff": {fmt_float(T[a, b, c])}}}'
            )
    lines.append(",\n".join(entries))
    lines.append("  ],")
    lines.append('  "involution": [')
    invs = [
        f'    {{"i": {i}, "j": {j}, "matrix": {_float_list(alg.involution[(i, j)].reshape(-1))}}}'
        for i, j in alg.blocks
    ]
    lines.append(",\n".join(invs))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(line for line in lines if line) + "\n"


def write_algebra(alg: BigradedAlgebra, path) -> None:
    Path(path).write_text(dumps_algebra(alg))


def dumps_element(a: AlgebraElement) -> str:
    rows = [
        f'    {{"i": {i}, "j": {j}, "coords": {_float_list(v)}}}'
        for (i, j), v in a.blocks.items()
        if np.any(v != 0)
    ]
    body = ",\n".join(rows)
    return (
        "{\n"
        f'  "format": "{ELEMENT_FORMAT}",\n'
        f"  \"algebra\": {json.dumps(a.algebra.name)},\n"
        '  "blocks": [\n' + (body + "\n" if body else "") + "  ]\n}\n"
    )


def write_element(a: AlgebraElement, path) -> None:
    Path(path).write_text(dumps_element(a))


# -- reading ----------------------------------------------------------------------


def _load_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorParseError(exc.msg, f"line {exc.lineno}") from None


def _int_field(entry, key, where):
    if key not in entry:
        raise DescriptorParseError(f"missing field {key!r}", where)
    val = entry[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise DescriptorParseError(f"{key!r} must be an integer, got {val!r}", f"{where}.{key}")
    return val


def _num_field(entry, key, where):
    if key not in entry:
        raise DescriptorParseError(f"missing field {key!r}", where)
    val = entry[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
        raise DescriptorParseError(f"{key!r} must be a finite number", f"{where}.{key}")
    return float(val)


def _list_field(doc, key, where=""):
    val = doc.get(key, [])
    if not isinstance(val, list):
        raise DescriptorParseError(f"{key!r} must be a list", f"{where}{key}")
    return val


def loads_algebra(text: str) -> BigradedAlgebra:
    """Parse descriptor text, enforcing the structural invariants."""
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise DescriptorParseError("top level must be an object", "line 1")
    rank = _int_field(doc, "rank", "<root>")
    if rank < 1:
        raise DescriptorParseError("rank must be >= 1", "rank")

    def check_idx(val, where):
        if not 1 <= val <= rank:
            raise DescriptorParseError(f"index {val} out of range 1..{rank}", where)

    dims = {}
    for n, entry in enumerate(_list_field(doc, "blocks")):
        where = f"blocks[{n}]"
        if not isinstance(entry, dict):
            raise DescriptorParseError("entry must be an object", where)
        i, j = _int_field(entry, "i", where), _int_field(entry, "j", where)
        check_idx(i, f"{where}.i")
        check_idx(j, f"{where}.j")
        dim = _int_field(entry, "dim", where)
        if dim < 0:
            raise DescriptorParseError("dim must be >= 0", f"{where}.dim")
        if (i, j) in dims:
            raise DescriptorParseError(f"block ({i},{j}) declared twice", where)
        dims[(i, j)] = dim
    for i in range(1, rank + 1):
        if dims.get((i, i), 0) != 1:
            raise DescriptorParseError(
                f"diagonal block ({i},{i}) must have dim 1 (axiom (i): A_ii is a copy "
                f"of the reals), got {dims.get((i, i), 0)}",
                "blocks",
            )
    for (i, j), n in dims.items():
        if dims.get((j, i), 0) != n:
            raise DescriptorParseError(
                f"blocks ({i},{j}) and ({j},{i}) must have equal dimension", "blocks"
            )

    def declared(blk, where):
        if dims.get(blk, 0) == 0:
            raise DescriptorParseError(f"block {blk} is referenced but not declared", where)
        return dims[blk]

    products, seen = {}, set()
    for n, entry in enumerate(_list_field(doc, "products")):
        where = f"products[{n}]"
        if not isinstance(entry, dict):
            raise DescriptorParseError("entry must be an object", where)
        i, j, k = (_int_field(entry, key, where) for key in ("i", "j", "k"))
        for key, val in zip("ijk", (i, j, k)):
            check_idx(val, f"{where}.{key}")
        shape = (
            declared((i, j), where),
            declared((j, k), where),
            declared((i, k), where),
        )
        idx = []
        for key, size in zip(("a_idx", "b_idx", "out_idx"), shape):
            v = _int_field(entry, key, where)
            if not 1 <= v <= size:
                raise DescriptorParseError(f"{key} {v} out of range 1..{size}", f"{where}.{key}")
            idx.append(v - 1)
        ident = (i, j, k, *idx)
        if ident in seen:
            raise DescriptorParseError("duplicate product entry", where)
        seen.add(ident)
        T = products.setdefault((i, j, k), np.zeros(shape))
        T[tuple(idx)] = _num_field(entry, "coeff", where)

    involution = {}
    for n, entry in enumerate(_list_field(doc, "involution")):
        where = f"involution[{n}]"
        if not isinstance(entry, dict):
            raise DescriptorParseError("entry must be an object", where)
        i, j = _int_field(entry, "i", where), _int_field(entry, "j", where)
        check_idx(i, f"{where}.i")
        check_idx(j, f"{where}.j")
        n_ij = declared((i, j), where)
        if (i, j) in involution:
            raise DescriptorParseError(f"involution for ({i},{j}) given twice", where)
        mat = entry.get("matrix")
        if not isinstance(mat, list) or len(mat) != n_ij * n_ij:
            raise DescriptorParseError(
                f"matrix must be a flat list of {n_ij * n_ij} numbers", f"{where}.matrix"
            )
        vals = [_num_field({"v": v}, "v", f"{where}.matrix[{m}]") for m, v in enumerate(mat)]
        involution[(i, j)] = np.array(vals).reshape(n_ij, n_ij)

    try:
        return BigradedAlgebra(rank, dims, products, involution, name=doc.get("name", "custom"))
    except MalformedAlgebraError as exc:
        raise DescriptorParseError(str(exc), "<algebra>") from None


def parse_descriptor(path) -> BigradedAlgebra:
    return loads_algebra(Path(path).read_text())


def loads_element(text: str, alg: BigradedAlgebra) -> AlgebraElement:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise DescriptorParseError("top level must be an object", "line 1")
    blocks = {}
    for n, entry in enumerate(_list_field(doc, "blocks")):
        where = f"blocks[{n}]"
        if not isinstance(entry, dict):
            raise DescriptorParseError("entry must be an object", where)
        i, j = _int_field(entry, "i", where), _int_field(entry, "j", where)
        dim = alg.block_dims.get((i, j), 0)
        if dim == 0:
            raise DescriptorParseError(f"block ({i},{j}) does not exist in {alg.name}", where)
        if (i, j) in blocks:
            raise DescriptorParseError(f"block ({i},{j}) given twice", where)
        coords = entry.get("coords")
        if not isinstance(coords, list) or len(coords) != dim:
            raise DescriptorParseError(f"coords must list {dim} numbers", f"{where}.coords")
        blocks[(i, j)] = [_num_field({"v": v}, "v", f"{where}.coords[{m}]") for m, v in enumerate(coords)]
    return AlgebraElement(alg, blocks)


def parse_element(path, alg: BigradedAlgebra) -> AlgebraElement:
    return loads_element(Path(path).read_text(), alg)
