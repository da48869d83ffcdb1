"""Metric reconstruction from label coordinates, with curvature audits.

Each edge of the graph carries a geodesic quadrilateral: the union of two
disk sectors with radii r_plus and r_minus meeting along the chord between
the edge's endpoints. Gluing the quadrilaterals along the face walks
rebuilds the spherical conical metric. The three Gauss-Bonnet identities
(per bigon, per face, global) hold for every finite K by construction, so
they audit the assembly code rather than the solve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bigon import shape_arrays
from .cellgraph import WeightedCellGraph, vertex_cone_angles
from .errors import AuditError
from .solver import _K_array

_TWO_PI = 2.0 * math.pi

DEFAULT_AUDIT_TOLS = {"bigon": 1e-12, "face": 1e-9, "global": 1e-9}


@dataclass(frozen=True)
class QuadRecord:
    """Geodesic quadrilateral of one edge: two sectors glued along r3.

    The plus fields belong to the face carrying the edge's "+" side, the
    minus fields to the "-" side. half_angle_* is the half sector angle
    alpha' at the center; the full sector angle is 2 * half_angle.
    """

    edge_id: object
    r_plus: float
    r_minus: float
    r3: float
    half_angle_plus: float
    half_angle_minus: float
    ell_plus: float
    ell_minus: float
    T_plus: float
    T_minus: float
    area: float


@dataclass(frozen=True)
class PatternMetric:
    """Full reconstructed geometry of a circle pattern at coordinates K."""

    radii: dict
    quads: dict
    center_cone_angles: dict
    vertex_cone_angles: dict
    face_areas: dict
    total_area: float


def reconstruct(g: WeightedCellGraph, K) -> PatternMetric:
    """Build the metric data at coordinates K (any finite values).

    Radii are arctan(exp(-K)) per face; every edge quadrilateral comes from
    the same forward formulas the solver differentiates, so the per-face
    curvature sums here match solver.total_curvatures exactly.
    """
    K_arr = _K_array(g, K)
    if not np.all(np.isfinite(K_arr)):
        raise ValueError("K must be finite")
    theta = g.theta_array
    r1, r2, r3, ap1, ap2, T1, T2 = shape_arrays(
        theta, K_arr[g.side_face_plus], K_arr[g.side_face_minus]
    )
    ell1 = 2.0 * ap1 * np.sin(r1)
    ell2 = 2.0 * ap2 * np.sin(r2)
    area = 2.0 * theta - T1 - T2

    radii_arr = np.arctan(np.exp(-K_arr))

    F = len(g.faces)
    alpha = np.zeros(F)
    np.add.at(alpha, g.side_face_plus, 2.0 * ap1)
    np.add.at(alpha, g.side_face_minus, 2.0 * ap2)

    # spherical sector area: (full sector angle) * (1 - cos r_f)
    sector_area = np.zeros(F)
    np.add.at(sector_area, g.side_face_plus, 2.0 * ap1 * (1.0 - np.cos(r1)))
    np.add.at(sector_area, g.side_face_minus, 2.0 * ap2 * (1.0 - np.cos(r2)))

    total_area = float(np.sum(2.0 * ap1 + 2.0 * ap2 - 2.0 * theta))

    quads = {}
    for i, e in enumerate(g.edges):
        quads[e.id] = QuadRecord(
            edge_id=e.id,
            r_plus=float(r1[i]),
            r_minus=float(r2[i]),
            r3=float(r3[i]),
            half_angle_plus=float(ap1[i]),
            half_angle_minus=float(ap2[i]),
            ell_plus=float(ell1[i]),
            ell_minus=float(ell2[i]),
            T_plus=float(T1[i]),
            T_minus=float(T2[i]),
            area=float(area[i]),
        )

    return PatternMetric(
        radii={f.id: float(radii_arr[i]) for i, f in enumerate(g.faces)},
        quads=quads,
        center_cone_angles={f.id: float(alpha[i]) for i, f in enumerate(g.faces)},
        vertex_cone_angles=vertex_cone_angles(g),
        face_areas={f.id: float(sector_area[i]) for i, f in enumerate(g.faces)},
        total_area=total_area,
    )


# -- Gauss-Bonnet audits ----------------------------------------------------


def face_boundary_curvatures(m: PatternMetric, g: WeightedCellGraph) -> dict:
    """T(boundary of D_f) per face, summed from the stored quadrilaterals."""
    totals = {f.id: 0.0 for f in g.faces}
    for e in g.edges:
        q = m.quads[e.id]
        totals[g.face_of_side[(e.id, "+")]] += q.T_plus
        totals[g.face_of_side[(e.id, "-")]] += q.T_minus
    return totals


def audit_residuals(m: PatternMetric, g: WeightedCellGraph) -> dict:
    """Worst absolute residual of each Gauss-Bonnet identity.

    Keys: "bigon" (A = 2 theta - T_plus - T_minus per edge), "face"
    (T(boundary of D_f) = alpha_f - Area(D_f)), "global" (total_area =
    2 pi chi - sum over cone points of (2 pi - alpha_p), cone points being
    all vertices and all face centers, zero-deficit ones included).
    """
    bigon = 0.0
    for e in g.edges:
        q = m.quads[e.id]
        bigon = max(bigon, abs(q.area + q.T_plus + q.T_minus - 2.0 * e.theta))

    face = 0.0
    boundary_T = face_boundary_curvatures(m, g)
    for f in g.faces:
        lhs = boundary_T[f.id]
        rhs = m.center_cone_angles[f.id] - m.face_areas[f.id]
        face = max(face, abs(lhs - rhs))

    deficit = sum(_TWO_PI - a for a in m.vertex_cone_angles.values())
    deficit += sum(_TWO_PI - a for a in m.center_cone_angles.values())
    global_res = abs(m.total_area - (_TWO_PI * g.euler_characteristic - deficit))

    return {"bigon": bigon, "face": face, "global": global_res}


def check_audit(m: PatternMetric, g: WeightedCellGraph, tols=None) -> dict:
    """Run all audits; raise AuditError naming the worst failing identity."""
    tols = dict(DEFAULT_AUDIT_TOLS if tols is None else tols)
    residuals = audit_residuals(m, g)
    failing = {
        name: residuals[name] / tols[name]
        for name in residuals
        if residuals[name] > tols[name]
    }
    if failing:
        worst = max(failing, key=failing.get)
        raise AuditError(
            f"{worst} identity residual {residuals[worst]:.3e} exceeds "
            f"{tols[worst]:.1e}"
        )
    return residuals


# -- net export -------------------------------------------------------------


def _face_corners(g: WeightedCellGraph, face):
    """Corner vertex after each side of the face walk, or Nones.

    corners[i] is the vertex shared by side i and side i+1 (cyclically)
    when the boundary admits a closed traversal in its given order; a
    boundary that does not chain (possible with strict=False) yields all
    None.
    """
    by_id = {e.id: e for e in g.edges}
    first = by_id[face.boundary[0][0]]
    starts = [(first.u, first.v)]
    if first.u != first.v:
        starts.append((first.v, first.u))
    for tail0, head in starts:
        heads = [head]
        ok = True
        for eid, _ori in face.boundary[1:]:
            e = by_id[eid]
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
            heads.append(head)
        if ok and head == tail0:
            return heads
    return [None] * len(face.boundary)


def export_net(m: PatternMetric, g: WeightedCellGraph) -> dict:
    """Quadrilateral decomposition as a plain document.

    One record per edge with the quad's side lengths (two radii each used
    twice, the diagonal r3) and half apex angles, plus gluing entries: for
    consecutive sides of a face walk, the center-to-vertex radius of the
    shared corner is identified between the two quads. Each record lists
    the gluings touching its own quad, so every identification appears
    twice (once per participant); a quad adjacent to itself lists both
    ends. The face's given cyclic order is the marking that fixes where
    gluing starts.
    """
    glue_by_edge = {e.id: [] for e in g.edges}
    for f in g.faces:
        corners = _face_corners(g, f)
        n = len(f.boundary)
        for i in range(n):
            this_side = f.boundary[i]
            next_side = f.boundary[(i + 1) % n]
            vertex = corners[i]
            glue_by_edge[this_side[0]].append(
                {
                    "side": [str(this_side[0]), this_side[1], "head"],
                    "face": str(f.id),
                    "vertex": vertex,
                    "to": [str(next_side[0]), next_side[1], "tail"],
                }
            )
            glue_by_edge[next_side[0]].append(
                {
                    "side": [str(next_side[0]), next_side[1], "tail"],
                    "face": str(f.id),
                    "vertex": vertex,
                    "to": [str(this_side[0]), this_side[1], "head"],
                }
            )

    records = []
    for e in g.edges:
        q = m.quads[e.id]
        records.append(
            {
                "edge_id": str(e.id),
                "face_plus": str(g.face_of_side[(e.id, "+")]),
                "face_minus": str(g.face_of_side[(e.id, "-")]),
                "r_plus": q.r_plus,
                "r_minus": q.r_minus,
                "r3": q.r3,
                "half_angle_plus": q.half_angle_plus,
                "half_angle_minus": q.half_angle_minus,
                "glue": glue_by_edge[e.id],
            }
        )
    return {"quads": records}
