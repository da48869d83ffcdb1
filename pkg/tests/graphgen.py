"""Random cellular surfaces and targets for property tests.

Surfaces are built the classical way: take random polygons, pair up all
their sides, glue each pair with a random orientation, and read vertices
off the corner identifications. Faces then close as walks by construction,
and validation (two sides per edge, connectivity, chi <= 2) prunes the
rest by retry.
"""
import math

import numpy as np

from circlepattern.cellgraph import (
    CurvatureTarget,
    EdgeRec,
    FaceRec,
    WeightedCellGraph,
)
from circlepattern.errors import GraphValidationError


def random_surface(rng, max_faces=8, max_sides=6, theta_lo=0.2, theta_hi=math.pi / 2):
    """Generate one valid random weighted cell graph."""
    for _ in range(400):
        P = int(rng.integers(1, max_faces + 1))
        sides = [int(rng.integers(1, max_sides + 1)) for _ in range(P)]
        if sum(sides) % 2:
            sides[rng.integers(0, P)] += 1
        offsets = []
        total = 0
        for p, m in enumerate(sides):
            offsets.append(total)
            total += m
        n_corners = total
        all_sides = [
            (p, j) for p, m in enumerate(sides) for j in range(m)
        ]
        order = rng.permutation(len(all_sides))
        pairs = [
            (all_sides[order[2 * i]], all_sides[order[2 * i + 1]])
            for i in range(len(all_sides) // 2)
        ]

        parent = list(range(n_corners))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        def corner(p, j):
            return offsets[p] + j % sides[p]

        flips = []
        for (pa, ja), (pb, jb) in pairs:
            # side (p, j) runs corner j -> corner j+1 in the face walk
            flip = bool(rng.integers(0, 2))
            flips.append(flip)
            if flip:
                union(corner(pa, ja), corner(pb, jb))
                union(corner(pa, ja + 1), corner(pb, jb + 1))
            else:
                union(corner(pa, ja), corner(pb, jb + 1))
                union(corner(pa, ja + 1), corner(pb, jb))

        roots = sorted({find(x) for x in range(n_corners)})
        vertex_of = {r: i for i, r in enumerate(roots)}

        edges = []
        side_label = {}
        for eid, ((pa, ja), (pb, jb)) in enumerate(pairs):
            u = vertex_of[find(corner(pa, ja))]
            v = vertex_of[find(corner(pa, ja + 1))]
            theta = float(rng.uniform(theta_lo, theta_hi))
            edges.append(EdgeRec(id=eid, u=u, v=v, theta=theta))
            side_label[(pa, ja)] = (eid, "+")
            side_label[(pb, jb)] = (eid, "-")

        faces = [
            FaceRec(
                id=p,
                boundary=tuple(side_label[(p, j)] for j in range(m)),
            )
            for p, m in enumerate(sides)
        ]
        try:
            return WeightedCellGraph(len(roots), edges, faces)
        except GraphValidationError:
            continue
    raise RuntimeError("random surface generation kept failing validation")


def feasible_targets(rng, g):
    """Targets with a coherent system built in, margins bounded below."""
    values = {}
    for e in g.edges:
        budget = 2.0 * e.theta
        values[(e.id, "+")] = float(rng.uniform(0.02, 0.45)) * budget
        values[(e.id, "-")] = float(rng.uniform(0.02, 0.45)) * budget
    targets = {}
    for f in g.faces:
        targets[f.id] = sum(values[s] for s in f.boundary)
    return CurvatureTarget(targets=targets)


def infeasible_targets(rng, g):
    """Targets violating the subset condition on a random subset by >= 5%."""
    F = len(g.faces)
    k = int(rng.integers(1, F + 1))
    chosen = list(rng.choice(F, size=k, replace=False))
    chosen_ids = {g.faces[i].id for i in chosen}
    budget = 0.0
    for i, e in enumerate(g.edges):
        fplus = g.faces[g.side_face_plus[i]].id
        fminus = g.faces[g.side_face_minus[i]].id
        if fplus in chosen_ids or fminus in chosen_ids:
            budget += 2.0 * e.theta
    overshoot = budget * float(rng.uniform(1.05, 1.6))
    shares = rng.dirichlet(np.ones(k)) * overshoot
    base = feasible_targets(rng, g).targets
    targets = dict(base)
    for i, fi in enumerate(chosen):
        targets[g.faces[fi].id] = float(max(shares[i], 1e-3))
    # renormalize so the chosen subset still overshoots even after the max()
    scale = overshoot / sum(targets[g.faces[fi].id] for fi in chosen)
    for fi in chosen:
        targets[g.faces[fi].id] *= scale
    return CurvatureTarget(targets=targets)
