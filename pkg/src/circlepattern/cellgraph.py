"""Combinatorial model of a weighted cellular graph on a closed surface.

Vertices are the integers 0..num_vertices-1. Each edge carries a weight
theta in (0, pi/2] and has two sides, written (edge_id, "+") and
(edge_id, "-"). A face is a cyclic walk of sides; across all faces every
edge contributes its "+" side exactly once and its "-" side exactly once.
Loops and parallel edges are allowed, and both sides of an edge may lie on
the same face.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import GraphValidationError, ParseError

_HALF_PI = math.pi / 2.0

ORIENTATIONS = ("+", "-")


@dataclass(frozen=True)
class EdgeRec:
    """One weighted edge; endpoints may coincide (a loop)."""

    id: object
    u: int
    v: int
    theta: float


@dataclass(frozen=True)
class FaceRec:
    """One face: a cyclic list of sides (edge_id, "+"|"-")."""

    id: object
    boundary: tuple


@dataclass(frozen=True)
class CurvatureTarget:
    """Prescribed total geodesic curvature per face, all strictly positive."""

    targets: dict


class WeightedCellGraph:
    """Validated cellular graph with derived incidence structure.

    Instances are immutable by contract: construct once, then read. Derived
    attributes:

    - ``oriented_sides``: tuple of ((edge_id, orientation), face_id, theta)
      covering all 2|E| sides in edge order, "+" before "-".
    - ``edge_index`` / ``face_index``: id -> position maps.
    - ``theta_array``: |E| weights in edge order.
    - ``side_face_plus`` / ``side_face_minus``: |E| arrays of face positions
      carrying each edge's two sides.
    - ``euler_characteristic``: V - E + F.
    """

    def __init__(self, num_vertices, edges, faces, strict=True):
        self.num_vertices = int(num_vertices)
        self.edges = tuple(edges)
        self.faces = tuple(faces)
        self.strict = bool(strict)
        self._validate()
        self._build_derived()

    # -- validation ---------------------------------------------------------

    def _validate(self):
        if self.num_vertices < 1:
            raise GraphValidationError(
                f"graph needs at least one vertex, got {self.num_vertices}"
            )
        seen_edge_ids = set()
        for e in self.edges:
            if e.id in seen_edge_ids:
                raise GraphValidationError(f"duplicate edge id {e.id!r}")
            seen_edge_ids.add(e.id)
            for w in (e.u, e.v):
                if not (0 <= w < self.num_vertices):
                    raise GraphValidationError(
                        f"edge {e.id!r}: endpoint {w} outside 0..{self.num_vertices - 1}"
                    )
            if not (math.isfinite(e.theta) and 0.0 < e.theta <= _HALF_PI):
                raise GraphValidationError(
                    f"edge {e.id!r}: theta {e.theta} outside (0, pi/2]"
                )
        if len({str(e.id) for e in self.edges}) != len(self.edges):
            raise GraphValidationError("edge ids collide after string conversion")

        seen_face_ids = set()
        side_count = {}
        for f in self.faces:
            if f.id in seen_face_ids:
                raise GraphValidationError(f"duplicate face id {f.id!r}")
            seen_face_ids.add(f.id)
            if not f.boundary:
                raise GraphValidationError(f"face {f.id!r}: empty boundary")
            for side in f.boundary:
                eid, ori = side
                if eid not in seen_edge_ids:
                    raise GraphValidationError(
                        f"face {f.id!r}: unknown edge {eid!r} in boundary"
                    )
                if ori not in ORIENTATIONS:
                    raise GraphValidationError(
                        f"face {f.id!r}: bad orientation {ori!r} (want '+' or '-')"
                    )
                side_count[(eid, ori)] = side_count.get((eid, ori), 0) + 1
        if len({str(f.id) for f in self.faces}) != len(self.faces):
            raise GraphValidationError("face ids collide after string conversion")

        for e in self.edges:
            for ori in ORIENTATIONS:
                n = side_count.get((e.id, ori), 0)
                if n != 1:
                    raise GraphValidationError(
                        f"edge {e.id!r}: side '{ori}' appears {n} times across "
                        f"face boundaries (expected exactly once)"
                    )

        if self.strict:
            by_id = {e.id: e for e in self.edges}
            for f in self.faces:
                if not _walk_closes(by_id, f.boundary):
                    raise GraphValidationError(
                        f"face {f.id!r}: boundary is not a single closed walk"
                    )

        self._check_connected()

        chi = self.num_vertices - len(self.edges) + len(self.faces)
        if chi > 2:
            raise GraphValidationError(
                f"Euler characteristic {chi} exceeds 2; not a closed surface"
            )

    def _check_connected(self):
        parent = list(range(self.num_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            ru, rv = find(e.u), find(e.v)
            if ru != rv:
                parent[ru] = rv
        roots = {find(v) for v in range(self.num_vertices)}
        if len(roots) != 1:
            raise GraphValidationError(
                f"graph is disconnected ({len(roots)} components)"
            )

    # -- derived structure --------------------------------------------------

    def _build_derived(self):
        self.edge_index = {e.id: i for i, e in enumerate(self.edges)}
        self.face_index = {f.id: i for i, f in enumerate(self.faces)}
        face_of_side = {}
        for f in self.faces:
            for side in f.boundary:
                face_of_side[side] = f.id
        self.face_of_side = face_of_side
        self.oriented_sides = tuple(
            ((e.id, ori), face_of_side[(e.id, ori)], e.theta)
            for e in self.edges
            for ori in ORIENTATIONS
        )
        self.theta_array = np.array([e.theta for e in self.edges])
        self.side_face_plus = np.array(
            [self.face_index[face_of_side[(e.id, "+")]] for e in self.edges],
            dtype=np.intp,
        )
        self.side_face_minus = np.array(
            [self.face_index[face_of_side[(e.id, "-")]] for e in self.edges],
            dtype=np.intp,
        )
        self.euler_characteristic = (
            self.num_vertices - len(self.edges) + len(self.faces)
        )

    @property
    def face_ids(self):
        return [f.id for f in self.faces]

    @property
    def edge_ids(self):
        return [e.id for e in self.edges]


def _walk_closes(edges_by_id, boundary):
    """Can the sides be traversed in order as one closed vertex walk?

    A side names an edge, not a direction; loops close from either end, and
    for a non-loop the previous head forces the direction. Tries both
    directions of the first side.
    """
    first = edges_by_id[boundary[0][0]]
    starts = [(first.u, first.v)]
    if first.u != first.v:
        starts.append((first.v, first.u))
    for tail0, head in starts:
        ok = True
        for eid, _ori in boundary[1:]:
            e = edges_by_id[eid]
            if e.u == e.v:
                if head != e.u:
                    ok = False
                    break
            elif e.u == head:
                head = e.v
            elif e.v == head:
                head = e.u
            else:
                ok = False
                break
        if ok and head == tail0:
            return True
    return False


# -- ingestion / serialization ---------------------------------------------


def _coerce_id(raw):
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise ParseError(f"ids must be strings or non-negative integers, got {raw!r}")
    if isinstance(raw, int) and raw < 0:
        raise ParseError(f"integer ids must be non-negative, got {raw}")
    return raw


def parse_graph(document, strict=True) -> WeightedCellGraph:
    """Parse and validate a graph document (JSON text or equivalent dict).

    Expected shape::

        {"vertices": V,
         "edges": [{"id": ..., "v": [a, b], "theta": t}, ...],
         "faces": [{"id": ..., "boundary": [[edge_id, "+"|"-"], ...]}, ...]}

    Raises ParseError for malformed documents and GraphValidationError when
    a structural invariant fails.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ParseError(f"graph document must be an object, got {type(document).__name__}")
    try:
        num_vertices = document["vertices"]
        raw_edges = document["edges"]
        raw_faces = document["faces"]
    except KeyError as exc:
        raise ParseError(f"graph document missing key {exc.args[0]!r}") from exc
    if not isinstance(num_vertices, int) or isinstance(num_vertices, bool):
        raise ParseError(f"'vertices' must be an integer, got {num_vertices!r}")

    edges = []
    for item in raw_edges:
        try:
            eid = _coerce_id(item["id"])
            u, v = item["v"]
            theta = item["theta"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed edge entry {item!r}") from exc
        if not isinstance(u, int) or not isinstance(v, int):
            raise ParseError(f"edge {eid!r}: endpoints must be integers")
        if not isinstance(theta, (int, float)) or isinstance(theta, bool):
            raise ParseError(f"edge {eid!r}: theta must be a number")
        edges.append(EdgeRec(id=eid, u=u, v=v, theta=float(theta)))

    faces = []
    for item in raw_faces:
        try:
            fid = _coerce_id(item["id"])
            raw_boundary = item["boundary"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed face entry {item!r}") from exc
        boundary = []
        for side in raw_boundary:
            try:
                eid, ori = side
            except (TypeError, ValueError) as exc:
                raise ParseError(
                    f"face {fid!r}: side must be [edge_id, orientation], got {side!r}"
                ) from exc
            boundary.append((_coerce_id(eid), ori))
        faces.append(FaceRec(id=fid, boundary=tuple(boundary)))

    return WeightedCellGraph(num_vertices, edges, faces, strict=strict)


def graph_to_dict(g: WeightedCellGraph) -> dict:
    """Canonical plain-data form of a graph (inverse of parse_graph)."""
    return {
        "vertices": g.num_vertices,
        "edges": [
            {"id": e.id, "v": [e.u, e.v], "theta": e.theta} for e in g.edges
        ],
        "faces": [
            {"id": f.id, "boundary": [[eid, ori] for eid, ori in f.boundary]}
            for f in g.faces
        ],
    }


def serialize_graph(g: WeightedCellGraph) -> str:
    """Canonical JSON text for a graph; parse_graph round-trips it."""
    return json.dumps(graph_to_dict(g), sort_keys=True)


def oriented_edges(g: WeightedCellGraph):
    """All 2|E| sides as (side, face_id, theta), side = (edge_id, "+"|"-")."""
    return list(g.oriented_sides)


def vertex_cone_angles(g: WeightedCellGraph) -> dict:
    """Cone angle at each vertex: sum of (pi - theta_e) over edge ends.

    A loop contributes both its ends, hence twice.
    """
    angles = {v: 0.0 for v in range(g.num_vertices)}
    for e in g.edges:
        angles[e.u] += math.pi - e.theta
        angles[e.v] += math.pi - e.theta
    return angles


def resolve_face_key(g: WeightedCellGraph, key):
    """Map an external face key (possibly JSON-stringified) to a face id."""
    if key in g.face_index:
        return key
    if isinstance(key, str):
        try:
            as_int = int(key)
        except ValueError:
            pass
        else:
            if as_int in g.face_index:
                return as_int
    raise ParseError(f"unknown face id {key!r}")


def parse_targets(g: WeightedCellGraph, document) -> CurvatureTarget:
    """Build a validated CurvatureTarget from JSON text or a mapping.

    Keys must cover exactly the graph's faces (JSON string keys for integer
    face ids are accepted); values must be finite and strictly positive.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ParseError(
            f"targets document must be an object, got {type(document).__name__}"
        )
    targets = {}
    for key, value in document.items():
        fid = resolve_face_key(g, key)
        if fid in targets:
            raise ParseError(f"duplicate target for face {fid!r}")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"target for face {fid!r} must be a number")
        value = float(value)
        if not (math.isfinite(value) and value > 0.0):
            raise ParseError(f"target for face {fid!r} must be finite and > 0")
        targets[fid] = value
    missing = [f.id for f in g.faces if f.id not in targets]
    if missing:
        raise ParseError(f"missing targets for faces {missing!r}")
    return CurvatureTarget(targets=targets)


def target_array(g: WeightedCellGraph, t: CurvatureTarget) -> np.ndarray:
    """Targets as a vector in face order."""
    return np.array([t.targets[f.id] for f in g.faces])
