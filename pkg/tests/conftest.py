"""Shared fixtures: the four canonical graphs used throughout the suite."""
import math

import pytest

from circlepattern.cellgraph import EdgeRec, FaceRec, WeightedCellGraph

HALF_PI = math.pi / 2.0


def make_digon_sphere(theta=HALF_PI):
    """Two vertices joined by two edges; two faces. A sphere, chi = 2."""
    edges = [
        EdgeRec(id=0, u=0, v=1, theta=theta),
        EdgeRec(id=1, u=0, v=1, theta=theta),
    ]
    faces = [
        FaceRec(id=0, boundary=((0, "+"), (1, "+"))),
        FaceRec(id=1, boundary=((0, "-"), (1, "-"))),
    ]
    return WeightedCellGraph(2, edges, faces)


def make_loop_face(theta=HALF_PI):
    """One vertex, one loop edge, one face bounded by both sides. chi = 1."""
    edges = [EdgeRec(id=0, u=0, v=0, theta=theta)]
    faces = [FaceRec(id=0, boundary=((0, "+"), (0, "-")))]
    return WeightedCellGraph(1, edges, faces)


def make_tetrahedron(theta=HALF_PI):
    """The tetrahedron graph: 4 vertices, 6 edges, 4 triangles. chi = 2."""
    edges = [
        EdgeRec(id=0, u=0, v=1, theta=theta),
        EdgeRec(id=1, u=0, v=2, theta=theta),
        EdgeRec(id=2, u=0, v=3, theta=theta),
        EdgeRec(id=3, u=1, v=2, theta=theta),
        EdgeRec(id=4, u=1, v=3, theta=theta),
        EdgeRec(id=5, u=2, v=3, theta=theta),
    ]
    faces = [
        FaceRec(id=0, boundary=((0, "+"), (3, "+"), (1, "-"))),
        FaceRec(id=1, boundary=((1, "+"), (5, "+"), (2, "-"))),
        FaceRec(id=2, boundary=((2, "+"), (4, "-"), (0, "-"))),
        FaceRec(id=3, boundary=((3, "-"), (4, "+"), (5, "-"))),
    ]
    return WeightedCellGraph(4, edges, faces)


def make_torus(theta=HALF_PI):
    """One vertex, two loop edges, one square face. A torus, chi = 0."""
    edges = [
        EdgeRec(id=0, u=0, v=0, theta=theta),
        EdgeRec(id=1, u=0, v=0, theta=theta),
    ]
    faces = [
        FaceRec(id=0, boundary=((0, "+"), (1, "+"), (0, "-"), (1, "-"))),
    ]
    return WeightedCellGraph(1, edges, faces)


@pytest.fixture
def digon_sphere():
    return make_digon_sphere()


@pytest.fixture
def loop_face():
    return make_loop_face()


@pytest.fixture
def tetrahedron():
    return make_tetrahedron()


@pytest.fixture
def torus():
    return make_torus()
