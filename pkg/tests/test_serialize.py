from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from zpcp import serialize as ser
from zpcp.arith import Q
from zpcp.errors import NotPLocal
from zpcp.groupring import Cyclo, GroupRingElt, MaxOrderElt
from zpcp.hermitian import example_dim2, example_dim2_gram
from zpcp.instances import block_type_instance, free_pair, make_rng, random_conjugate_symmetric
from zpcp.serialize import SchemaError


def test_rationals_are_strings():
    assert ser.vec_to_json([Q(1, 2), Q(-3), Q(0)]) == ["1/2", "-3", "0"]
    assert ser.vec_from_json(["1/2", " -3 ", 4]) == [Q(1, 2), Q(-3), Q(4)]


def test_bad_rationals_rejected():
    for bad in ["1.5", "1e3", "", "1/0", "x"]:
        with pytest.raises(SchemaError):
            ser.vec_from_json([bad])


def test_ring_elements():
    p = 3
    x = GroupRingElt([1, Q(1, 2), -1], p)
    assert ser.ring_elt_from_json(ser.ring_elt_to_json(x), p) == x
    with pytest.raises(NotPLocal):
        ser.ring_elt_from_json(["1/3", "0", "0"], p)
    with pytest.raises(SchemaError):
        ser.ring_elt_from_json(["1", "0"], p)
    m = MaxOrderElt(Q(1, 3), Cyclo.pi(p).inverse())
    assert ser.max_order_from_json(ser.max_order_to_json(m), p) == m


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 2), st.data())
def test_lattice_pair_round_trip(p, a, data):
    t = data.draw(st.integers(0, a))
    M, L = free_pair(p, a, t, make_rng("ser", data.draw(st.integers(0, 10**6))))
    doc = ser.instance_doc(p, "lattice_pair", ser.lattice_pair_to_json(M, L))
    p2, kind, (M2, L2) = ser.loads_instance(ser.dumps(doc))
    assert (p2, kind) == (p, "lattice_pair")
    assert M2.lattice == M.lattice and L2.lattice == L.lattice and M2.sigma == M.sigma


def test_other_kinds_round_trip():
    p = 3
    M = block_type_instance(p, 1, 1, 1, make_rng("k", 0))
    _, _, M2 = ser.load_instance(ser.instance_doc(p, "sigma_lattice", ser.sigma_lattice_to_json(M)))
    assert M2.lattice == M.lattice
    F = example_dim2(p)
    _, _, F2 = ser.load_instance(json.loads(ser.dumps(ser.instance_doc(p, "formed_lattice", ser.formed_lattice_to_json(F)))))
    assert F2.form == F.form and F2.lattice == F.lattice
    G = random_conjugate_symmetric(make_rng("g", 0), p, 2)
    _, _, G2 = ser.load_instance(ser.instance_doc(p, "hermitian_gram", ser.hermitian_gram_to_json(G)))
    assert G2 == G


def test_schema_violations():
    p = 3
    good = ser.instance_doc(p, "hermitian_gram", ser.hermitian_gram_to_json(example_dim2_gram(p)))
    ser.validate_instance(good)
    for mutate in [
        lambda d: d.update(schema_version="2"),
        lambda d: d.update(kind="nope"),
        lambda d: d.update(p=4),
        lambda d: d.pop("payload"),
        lambda d: d["payload"]["gram"][0][0].__setitem__(0, 1.5),
    ]:
        d = json.loads(json.dumps(good))
        mutate(d)
        with pytest.raises(SchemaError):
            ser.load_instance(d)


def test_semantic_violations():
    p = 3
    G = [[["1", "1", "0"]]]  # 1 + sigma is not conjugate-symmetric
    with pytest.raises(SchemaError):
        ser.load_instance(ser.instance_doc(p, "hermitian_gram", {"gram": G}))
    half = {"ambient_dim": 2, "basis": [["1", "0"]], "sigma": [["1", "0"], ["0", "1"]]}
    with pytest.raises(SchemaError):
        ser.load_instance(ser.instance_doc(p, "sigma_lattice", half))
    with pytest.raises(SchemaError):
        ser.loads_instance("{not json")


def test_dumps_is_canonical():
    doc = {"b": [1, 2], "a": "x"}
    assert ser.dumps(doc) == '{"a":"x","b":[1,2]}\n'
    assert json.loads(ser.dumps(doc, pretty=True)) == doc
