"""JSON wire format. Rationals travel as "num/den" strings, never as floats."""

from __future__ import annotations

import json
from typing import Any, Sequence

import jsonschema

from .arith import check_prime, format_rational, parse_p_local, parse_rational
from .errors import ZpcpError
from .groupring import Cyclo, GroupRingElt, MaxOrderElt
from .hermitian import FormedLattice, is_conjugate_symmetric
from .modulestruct import SigmaLattice
from .plattice import ZpLattice

SCHEMA_VERSION = "1"


class SchemaError(ZpcpError):
    """Input document is malformed or violates an invariant on load."""


# integers are accepted for convenience; floats never are
_RAT = {"anyOf": [{"type": "string", "pattern": r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$"}, {"type": "integer"}]}
_VEC = {"type": "array", "items": _RAT}
_MAT = {"type": "array", "items": _VEC}

_PAYLOAD_SCHEMAS = {
    "sigma_lattice": {
        "type": "object",
        "required": ["ambient_dim", "basis", "sigma"],
        "properties": {"p": {"type": "integer"}, "ambient_dim": {"type": "integer", "minimum": 0}, "basis": _MAT, "sigma": _MAT},
    },
    "formed_lattice": {
        "type": "object",
        "required": ["basis", "sigma", "form"],
        "properties": {"ambient_dim": {"type": "integer", "minimum": 0}, "basis": _MAT, "sigma": _MAT, "form": _MAT},
    },
    "hermitian_gram": {
        "type": "object",
        "required": ["gram"],
        "properties": {"gram": {"type": "array", "items": {"type": "array", "items": _VEC}}},
    },
    "lattice_pair": {
        "type": "object",
        "required": ["ambient_dim", "sigma", "M", "L"],
        "properties": {"ambient_dim": {"type": "integer", "minimum": 0}, "sigma": _MAT, "M": _MAT, "L": _MAT},
    },
}

INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "p", "kind", "payload"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "p": {"type": "integer", "minimum": 2},
        "kind": {"enum": sorted(_PAYLOAD_SCHEMAS)},
        "payload": {"type": "object"},
    },
}


# -- scalars and matrices ------------------------------------------------------


def rat(x) -> str:
    return format_rational(x)


def vec_to_json(v: Sequence) -> list:
    return [rat(x) for x in v]


def mat_to_json(A: Sequence[Sequence]) -> list:
    return [vec_to_json(r) for r in A]


def _parse(x):
    try:
        return parse_rational(x)
    except ValueError as e:
        raise SchemaError(str(e)) from None


def vec_from_json(v: Sequence) -> list:
    return [_parse(x) for x in v]


def mat_from_json(A: Sequence[Sequence]) -> list:
    return [vec_from_json(r) for r in A]


def ring_elt_to_json(x) -> list:
    return vec_to_json(x.coeffs)


def ring_elt_from_json(v: Sequence, p: int) -> GroupRingElt:
    if len(v) != p:
        raise SchemaError(f"group ring element needs {p} coefficients, got {len(v)}")
    try:
        return GroupRingElt([parse_p_local(x, p) for x in v], p)
    except ValueError as e:
        raise SchemaError(str(e)) from None


def max_order_to_json(m: MaxOrderElt) -> dict:
    return {"s": rat(m.s), "t": vec_to_json(m.t.coeffs)}


def max_order_from_json(d: dict, p: int) -> MaxOrderElt:
    t = d.get("t")
    if not isinstance(t, list) or len(t) != p - 1:
        raise SchemaError(f"cyclotomic part needs {p - 1} coefficients")
    return MaxOrderElt(_parse(d.get("s")), Cyclo(vec_from_json(t), p))


# -- structured payloads ------------------------------------------------------------


def sigma_lattice_to_json(L: SigmaLattice) -> dict:
    return {"p": L.p, "ambient_dim": L.ambient_dim, "basis": mat_to_json(L.basis), "sigma": mat_to_json(L.sigma)}


def _check_square(A, N, what):
    if len(A) != N or any(len(r) != N for r in A):
        raise SchemaError(f"{what} must be {N}x{N}")


def _lattice(rows, p, N, what) -> ZpLattice:
    if any(len(r) != N for r in rows):
        raise SchemaError(f"{what} rows must have length {N}")
    return ZpLattice(mat_from_json(rows), p, N)


def sigma_lattice_from_json(d: dict, p: int) -> SigmaLattice:
    if d.get("p", p) != p:
        raise SchemaError(f"payload prime {d['p']} disagrees with document prime {p}")
    N = d["ambient_dim"]
    sigma = mat_from_json(d["sigma"])
    _check_square(sigma, N, "sigma")
    L = _lattice(d["basis"], p, N, "basis")
    if L.rank != N:
        raise SchemaError("basis does not span a full-rank lattice")
    return SigmaLattice(L, sigma)


def formed_lattice_to_json(L: FormedLattice) -> dict:
    return {
        "ambient_dim": L.module.ambient_dim,
        "basis": mat_to_json(L.lattice.basis),
        "sigma": mat_to_json(L.module.sigma),
        "form": mat_to_json(L.form),
    }


def formed_lattice_from_json(d: dict, p: int) -> FormedLattice:
    N = d.get("ambient_dim", len(d["sigma"]))
    M = sigma_lattice_from_json({"ambient_dim": N, "basis": d["basis"], "sigma": d["sigma"]}, p)
    form = mat_from_json(d["form"])
    _check_square(form, N, "form")
    return FormedLattice(M, form)


def hermitian_gram_to_json(G: Sequence[Sequence]) -> dict:
    return {"gram": [[ring_elt_to_json(x) for x in row] for row in G]}


def hermitian_gram_from_json(d: dict, p: int) -> list:
    rows = d["gram"]
    a = len(rows)
    if any(len(r) != a for r in rows):
        raise SchemaError("Hermitian Gram must be square")
    G = [[ring_elt_from_json(x, p) for x in r] for r in rows]
    if not is_conjugate_symmetric(G):
        raise SchemaError("Hermitian Gram is not conjugate-symmetric")
    return G


def lattice_pair_to_json(M: SigmaLattice, L: SigmaLattice) -> dict:
    return {
        "ambient_dim": M.ambient_dim,
        "sigma": mat_to_json(M.sigma),
        "M": mat_to_json(M.basis),
        "L": mat_to_json(L.basis),
    }


def lattice_pair_from_json(d: dict, p: int) -> tuple:
    N = d["ambient_dim"]
    M = sigma_lattice_from_json({"ambient_dim": N, "basis": d["M"], "sigma": d["sigma"]}, p)
    L = sigma_lattice_from_json({"ambient_dim": N, "basis": d["L"], "sigma": d["sigma"]}, p)
    return M, L


_LOADERS = {
    "sigma_lattice": sigma_lattice_from_json,
    "formed_lattice": formed_lattice_from_json,
    "hermitian_gram": hermitian_gram_from_json,
    "lattice_pair": lattice_pair_from_json,
}


# -- documents ---------------------------------------------------------------------


def instance_doc(p: int, kind: str, payload: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "p": p, "kind": kind, "payload": payload}


def _reject_floats(obj):
    if isinstance(obj, float):
        raise SchemaError(f"floating-point value {obj!r} on the wire")
    if isinstance(obj, dict):
        for v in obj.values():
            _reject_floats(v)
    elif isinstance(obj, list):
        for v in obj:
            _reject_floats(v)


def validate_instance(doc: Any) -> None:
    _reject_floats(doc)
    try:
        jsonschema.validate(doc, INSTANCE_SCHEMA)
        jsonschema.validate(doc["payload"], _PAYLOAD_SCHEMAS[doc["kind"]])
    except jsonschema.ValidationError as e:
        raise SchemaError(f"schema violation: {e.message}") from None
    try:
        check_prime(doc["p"])
    except ValueError as e:
        raise SchemaError(str(e)) from None


def load_instance(doc: Any) -> tuple:
    """(p, kind, object) from a parsed InstanceDoc; the object is fully validated."""
    validate_instance(doc)
    p, kind = doc["p"], doc["kind"]
    return p, kind, _LOADERS[kind](doc["payload"], p)


def loads_instance(text: str) -> tuple:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}") from None
    return load_instance(doc)


def dumps(doc: Any, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def report_doc(command: str, status: str, result: Any, diagnostics: Sequence[str] = (), seed=None, rng=None) -> dict:
    doc = {"command": command, "status": status, "result": result, "diagnostics": list(diagnostics)}
    if seed is not None:
        doc["seed"] = seed
        doc["rng"] = rng
    return doc
