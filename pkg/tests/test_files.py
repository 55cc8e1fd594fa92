import json

import numpy as np
import pytest

from diskspanner.errors import UsageError
from diskspanner.families import gen_euclid_random, gen_lowerbound, gen_multiscale_chain
from diskspanner.files import (
    Instance,
    canonical_json,
    deserialize_instance,
    deserialize_spanner,
    read_instance,
    read_spanner,
    serialize_instance,
    serialize_spanner,
    write_instance,
    write_json,
)
from diskspanner.diskgraph import build_disk_graph, normalize
from diskspanner.spanner import Params, SpannerEdge, disk_spanner


def test_canonical_json_is_order_independent():
    a = canonical_json({"b": 1, "a": [1, 2], "c": {"y": 0, "x": 1}})
    b = canonical_json({"c": {"x": 1, "y": 0}, "a": [1, 2], "b": 1})
    assert a == b
    assert a == b'{"a":[1,2],"b":1,"c":{"x":1,"y":0}}\n'


def test_canonical_json_repeatable():
    doc = serialize_instance(gen_euclid_random(20, seed=7))
    assert canonical_json(doc) == canonical_json(doc)


def test_euclidean_instance_roundtrip(tmp_path):
    inst = gen_euclid_random(15, seed=3)
    path = tmp_path / "inst.json"
    write_instance(path, inst)
    back = read_instance(path)
    assert back == inst
    assert back.kind == "euclidean"
    assert back.n == 15
    assert back.dim == 2
    d0 = inst.metric.distance_matrix()
    d1 = back.metric.distance_matrix()
    assert np.array_equal(d0, d1)


def test_matrix_instance_roundtrip(tmp_path):
    inst = gen_multiscale_chain(10, levels=3)
    path = tmp_path / "chain.json"
    write_instance(path, inst)
    back = read_instance(path)
    assert back == inst
    assert back.kind == "matrix"
    assert np.array_equal(
        back.metric.distance_matrix(), inst.metric.distance_matrix()
    )


def test_closure_instance_recloses_on_read(tmp_path):
    # the file stores the prescribed matrix; reading reapplies the closure
    inst = gen_lowerbound(4, eps=0.25)
    path = tmp_path / "lb.json"
    write_instance(path, inst)
    back = read_instance(path)
    assert np.array_equal(back.dist, inst.dist)
    d = back.metric.distance_matrix()
    assert d[3, 0] == 36.0
    assert d[1, 0] == 8.25


def test_instance_file_is_byte_stable(tmp_path):
    inst = gen_euclid_random(12, seed=9)
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    write_instance(p1, inst)
    write_instance(p2, gen_euclid_random(12, seed=9))
    assert p1.read_bytes() == p2.read_bytes()


@pytest.mark.parametrize(
    "mangle",
    [
        lambda d: d.update(version=2),
        lambda d: d.update(kind="hyperbolic"),
        lambda d: d.pop("radii"),
        lambda d: d.update(n=99),
        lambda d: d.pop("coords"),
        lambda d: d.update(dim=5),
    ],
)
def test_bad_instance_documents_rejected(mangle):
    doc = serialize_instance(gen_euclid_random(6, seed=0))
    mangle(doc)
    with pytest.raises(UsageError):
        deserialize_instance(doc)


def test_non_object_document_rejected():
    with pytest.raises(UsageError):
        deserialize_instance([1, 2, 3])


def test_read_instance_missing_file(tmp_path):
    with pytest.raises(UsageError):
        read_instance(tmp_path / "nope.json")


def test_read_instance_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(UsageError):
        read_instance(p)


@pytest.fixture(scope="module")
def built():
    inst = gen_euclid_random(25, seed=5)
    gn, scale = normalize(build_disk_graph(inst.metric, inst.radii))
    return inst, scale, disk_spanner(gn, Params(0.5))


def test_spanner_roundtrip(tmp_path, built):
    inst, scale, sp = built
    doc = serialize_spanner("baseline", sp.params, scale, inst.n, sp.edges)
    path = tmp_path / "sp.json"
    write_json(path, doc)
    back = read_spanner(path)
    assert back.mode == "baseline"
    assert back.params == sp.params
    assert back.scale == scale
    assert back.n == inst.n
    assert [
        (e.source, e.target, e.weight, e.level, e.case, e.origin, e.survived)
        for e in back.edges
    ] == [
        (e.source, e.target, e.weight, e.level, e.case, e.origin, e.survived)
        for e in sp.edges
    ]


def test_spanner_surviving_filters():
    edges = [
        SpannerEdge(0, 1, 1.0, 0, "small", survived=True),
        SpannerEdge(1, 2, 1.0, 0, "small", survived=False),
    ]
    doc = serialize_spanner("relaxed", Params(0.5), 2.0, 3, edges)
    back = deserialize_spanner(doc)
    kept = back.surviving()
    assert [(e.source, e.target) for e in kept] == [(0, 1)]


@pytest.mark.parametrize(
    "mangle",
    [
        lambda d: d.update(version=0),
        lambda d: d.update(mode="approximate"),
        lambda d: d["params"].pop("eps"),
        lambda d: d["edges"][0].pop("w"),
        lambda d: d.update(n=0),
        lambda d: d.pop("n"),
    ],
)
def test_bad_spanner_documents_rejected(mangle, built):
    inst, scale, sp = built
    doc = serialize_spanner("baseline", sp.params, scale, inst.n, sp.edges)
    doc = json.loads(canonical_json(doc))
    mangle(doc)
    with pytest.raises(UsageError):
        deserialize_spanner(doc)


def test_read_spanner_malformed(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("[]")
    with pytest.raises(UsageError):
        read_spanner(p)


def test_instance_equality_discriminates():
    a = gen_euclid_random(8, seed=1)
    b = gen_euclid_random(8, seed=2)
    assert a == deserialize_instance(serialize_instance(a))
    assert a != b
    assert a != "not an instance"
