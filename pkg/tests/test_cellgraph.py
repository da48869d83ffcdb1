"""Tests for graph ingestion, validation, and derived incidence."""
import json
import math

import pytest

from circlepattern.cellgraph import (
    EdgeRec,
    FaceRec,
    WeightedCellGraph,
    graph_to_dict,
    oriented_edges,
    parse_graph,
    parse_targets,
    serialize_graph,
    target_array,
    vertex_cone_angles,
)
from circlepattern.errors import GraphValidationError, ParseError

from conftest import make_digon_sphere, make_loop_face, make_tetrahedron, make_torus

HALF_PI = math.pi / 2.0

DIGON_DOC = {
    "vertices": 2,
    "edges": [
        {"id": 0, "v": [0, 1], "theta": HALF_PI},
        {"id": 1, "v": [0, 1], "theta": HALF_PI},
    ],
    "faces": [
        {"id": 0, "boundary": [[0, "+"], [1, "+"]]},
        {"id": 1, "boundary": [[0, "-"], [1, "-"]]},
    ],
}


def test_parse_digon_sphere():
    g = parse_graph(json.dumps(DIGON_DOC))
    assert g.num_vertices == 2
    assert len(g.edges) == 2 and len(g.faces) == 2
    assert g.euler_characteristic == 2


def test_parse_accepts_dict_and_loop_face():
    doc = {
        "vertices": 1,
        "edges": [{"id": "e", "v": [0, 0], "theta": HALF_PI}],
        "faces": [{"id": "f", "boundary": [["e", "+"], ["e", "-"]]}],
    }
    g = parse_graph(doc)
    assert g.euler_characteristic == 1  # accepted, chi recorded
    assert len(g.oriented_sides) == 2


def test_canonical_graph_counts():
    for g, sides, chi in [
        (make_digon_sphere(), 4, 2),
        (make_loop_face(), 2, 1),
        (make_tetrahedron(), 12, 2),
        (make_torus(), 4, 0),
    ]:
        assert len(g.oriented_sides) == 2 * len(g.edges)
        assert len(g.oriented_sides) == sides
        assert g.euler_characteristic == chi


def test_oriented_edges_listing(digon_sphere, loop_face, tetrahedron):
    entries = oriented_edges(digon_sphere)
    assert len(entries) == 4
    faces_seen = sorted(str(fid) for _, fid, _ in entries)
    assert faces_seen == ["0", "0", "1", "1"]
    for (eid, ori), fid, theta in entries:
        assert ori in "+-"
        assert theta == HALF_PI

    entries = oriented_edges(loop_face)
    assert len(entries) == 2
    assert {fid for _, fid, _ in entries} == {0}

    entries = oriented_edges(tetrahedron)
    assert len(entries) == 12
    per_face = {}
    for _, fid, _ in entries:
        per_face[fid] = per_face.get(fid, 0) + 1
    assert per_face == {0: 3, 1: 3, 2: 3, 3: 3}


def test_vertex_cone_angles_examples(tetrahedron, digon_sphere):
    angles = vertex_cone_angles(tetrahedron)
    for v in range(4):
        assert angles[v] == pytest.approx(3.0 * HALF_PI, abs=1e-15)
    angles = vertex_cone_angles(digon_sphere)
    for v in range(2):
        assert angles[v] == pytest.approx(math.pi, abs=1e-15)
    # loop counted twice
    angles = vertex_cone_angles(make_loop_face())
    assert angles[0] == pytest.approx(math.pi, abs=1e-15)


def test_edge_end_count_matches_sides(tetrahedron, torus):
    for g in (tetrahedron, torus):
        ends = sum(2 for _ in g.edges)
        assert len(g.oriented_sides) == ends


def test_duplicate_side_rejected():
    doc = json.loads(json.dumps(DIGON_DOC))
    doc["faces"][1]["boundary"] = [[0, "+"], [1, "-"]]
    with pytest.raises(GraphValidationError, match="side"):
        parse_graph(doc)


def test_missing_side_rejected():
    doc = json.loads(json.dumps(DIGON_DOC))
    doc["faces"] = [doc["faces"][0]]
    with pytest.raises(GraphValidationError):
        parse_graph(doc)


def test_theta_out_of_range_rejected():
    for bad in (0.0, -1.0, HALF_PI + 0.01, math.nan):
        doc = json.loads(json.dumps(DIGON_DOC))
        doc["edges"][0]["theta"] = bad
        with pytest.raises(GraphValidationError, match="theta"):
            parse_graph(doc)


def test_non_closed_walk_rejected_in_strict_mode():
    # a single non-loop side cannot close a walk
    doc = {
        "vertices": 2,
        "edges": [{"id": 0, "v": [0, 1], "theta": 1.0}],
        "faces": [
            {"id": 0, "boundary": [[0, "+"]]},
            {"id": 1, "boundary": [[0, "-"]]},
        ],
    }
    with pytest.raises(GraphValidationError, match="closed walk"):
        parse_graph(doc)


def test_non_strict_skips_walk_chaining():
    # loops at two different vertices listed on one face: the walk cannot
    # chain, but every multiset invariant holds and chi = 2 - 3 + 3 = 2
    doc = {
        "vertices": 2,
        "edges": [
            {"id": 0, "v": [0, 0], "theta": 1.0},
            {"id": 1, "v": [1, 1], "theta": 1.0},
            {"id": 2, "v": [0, 1], "theta": 1.0},
        ],
        "faces": [
            {"id": 0, "boundary": [[0, "+"], [1, "+"]]},
            {"id": 1, "boundary": [[0, "-"], [1, "-"]]},
            {"id": 2, "boundary": [[2, "+"], [2, "-"]]},
        ],
    }
    with pytest.raises(GraphValidationError, match="closed walk"):
        parse_graph(doc)
    g = parse_graph(doc, strict=False)
    assert g.euler_characteristic == 2


def test_disconnected_rejected():
    doc = {
        "vertices": 4,
        "edges": [
            {"id": 0, "v": [0, 1], "theta": 1.0},
            {"id": 1, "v": [0, 1], "theta": 1.0},
            {"id": 2, "v": [2, 3], "theta": 1.0},
            {"id": 3, "v": [2, 3], "theta": 1.0},
        ],
        "faces": [
            {"id": 0, "boundary": [[0, "+"], [1, "+"]]},
            {"id": 1, "boundary": [[0, "-"], [1, "-"]]},
            {"id": 2, "boundary": [[2, "+"], [3, "+"]]},
            {"id": 3, "boundary": [[2, "-"], [3, "-"]]},
        ],
    }
    with pytest.raises(GraphValidationError, match="disconnected"):
        parse_graph(doc)


def test_malformed_documents_raise_parse_error():
    with pytest.raises(ParseError):
        parse_graph("not json {")
    with pytest.raises(ParseError):
        parse_graph(json.dumps([1, 2, 3]))
    with pytest.raises(ParseError):
        parse_graph({"vertices": 2, "edges": []})  # missing faces
    doc = json.loads(json.dumps(DIGON_DOC))
    doc["edges"][0] = {"id": 0, "theta": 1.0}
    with pytest.raises(ParseError):
        parse_graph(doc)
    doc = json.loads(json.dumps(DIGON_DOC))
    doc["faces"][0]["boundary"][0] = [0]
    with pytest.raises(ParseError):
        parse_graph(doc)


def test_serialize_parse_round_trip():
    g = parse_graph(json.dumps(DIGON_DOC))
    text = serialize_graph(g)
    g2 = parse_graph(text)
    assert serialize_graph(g2) == text
    assert graph_to_dict(g2) == graph_to_dict(g)
    # canonical form is stable for all fixture graphs
    for make in (make_digon_sphere, make_loop_face, make_tetrahedron, make_torus):
        g = make()
        assert serialize_graph(parse_graph(serialize_graph(g))) == serialize_graph(g)


def test_targets_parse_and_validate(digon_sphere):
    t = parse_targets(digon_sphere, json.dumps({"0": 1.0, "1": 2.0}))
    assert t.targets == {0: 1.0, 1: 2.0}
    arr = target_array(digon_sphere, t)
    assert arr.tolist() == [1.0, 2.0]
    with pytest.raises(ParseError, match="missing"):
        parse_targets(digon_sphere, {"0": 1.0})
    with pytest.raises(ParseError):
        parse_targets(digon_sphere, {"0": 1.0, "1": -2.0})
    with pytest.raises(ParseError):
        parse_targets(digon_sphere, {"0": 1.0, "1": 0.0})
    with pytest.raises(ParseError, match="unknown"):
        parse_targets(digon_sphere, {"0": 1.0, "1": 1.0, "9": 1.0})
    with pytest.raises(ParseError):
        parse_targets(digon_sphere, "[]")


def test_side_face_arrays(tetrahedron):
    g = tetrahedron
    for i, e in enumerate(g.edges):
        fplus = g.faces[g.side_face_plus[i]]
        assert (e.id, "+") in fplus.boundary
        fminus = g.faces[g.side_face_minus[i]]
        assert (e.id, "-") in fminus.boundary


def test_chi_above_two_rejected():
    doc = {
        "vertices": 2,
        "edges": [{"id": 0, "v": [0, 1], "theta": 1.0}],
        "faces": [
            {"id": 0, "boundary": [[0, "+"]]},
            {"id": 1, "boundary": [[0, "-"]]},
        ],
    }
    with pytest.raises(GraphValidationError):
        parse_graph(doc, strict=False)  # chi = 2 - 1 + 2 = 3
