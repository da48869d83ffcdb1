"""Feasibility of curvature targets.

A target vector (T_f) is feasible exactly when a coherent angle system
exists: positive side values T_hat with T_hat(e+) + T_hat(e-) < 2 theta_e
per edge and side sums matching T_f per face. The LP maximizes the worst
strict-inequality margin; the exhaustive subset checker is the exact
combinatorial oracle for the same condition.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cellgraph import CurvatureTarget, WeightedCellGraph, target_array
from .errors import SubsetSizeError
from .simplex import simplex_solve

_VERDICT_TOL = 1e-10
_MAX_EXHAUSTIVE_FACES = 20


@dataclass(frozen=True)
class CoherentSystem:
    """Witness of feasibility: positive side curvatures with their margin.

    values maps each side (edge_id, "+"|"-") to T_hat; slack is the least
    margin over all strict constraints (side positivity and edge budgets).
    """

    values: dict
    slack: float


@dataclass(frozen=True)
class SubsetCheckResult:
    """Outcome of the exhaustive subset condition check.

    worst_subset maximizes margin = sum of targets - sum of 2 theta over
    incident edges; the condition passes when even that margin is < 0.
    """

    passes: bool
    worst_subset: tuple
    worst_margin: float


@dataclass(frozen=True)
class FeasibilityResult:
    """LP verdict: a CoherentSystem when feasible, else a certificate.

    certificate is a violating face subset when one was identified, or None
    when the instance is too large to search ("no small certificate").
    optimal_slack is the LP optimum s*.
    """

    feasible: bool
    system: CoherentSystem | None
    certificate: tuple | None
    optimal_slack: float


def subset_margin(g: WeightedCellGraph, targets: CurvatureTarget, subset) -> float:
    """Exact margin of one face subset; >= 0 means the condition fails.

    Each edge incident with the subset is counted once, whether one or both
    of its sides touch it.
    """
    chosen = set(subset)
    total = sum(targets.targets[f] for f in chosen)
    budget = 0.0
    for i, e in enumerate(g.edges):
        fplus = g.faces[g.side_face_plus[i]].id
        fminus = g.faces[g.side_face_minus[i]].id
        if fplus in chosen or fminus in chosen:
            budget += 2.0 * e.theta
    return total - budget


def exhaustive_subset_check(
    g: WeightedCellGraph, targets: CurvatureTarget
) -> SubsetCheckResult:
    """Check every nonempty face subset; exponential in |F|, capped at 20."""
    F = len(g.faces)
    if F > _MAX_EXHAUSTIVE_FACES:
        raise SubsetSizeError(
            f"exhaustive subset check limited to {_MAX_EXHAUSTIVE_FACES} faces, "
            f"got {F}"
        )
    T = target_array(g, targets)
    n_subsets = 1 << F
    idx = np.arange(n_subsets, dtype=np.int64)
    sums = np.zeros(n_subsets)
    for f in range(F):
        sums += ((idx >> f) & 1) * T[f]
    budgets = np.zeros(n_subsets)
    for i, e in enumerate(g.edges):
        mask = (1 << int(g.side_face_plus[i])) | (1 << int(g.side_face_minus[i]))
        budgets += ((idx & mask) != 0) * (2.0 * e.theta)
    margins = sums - budgets
    margins[0] = -np.inf  # empty subset is vacuous
    worst = int(np.argmax(margins))
    worst_subset = tuple(
        g.faces[f].id for f in range(F) if (worst >> f) & 1
    )
    worst_margin = float(margins[worst])
    return SubsetCheckResult(
        passes=worst_margin < 0.0,
        worst_subset=worst_subset,
        worst_margin=worst_margin,
    )


def _build_lp(g, targets):
    E = len(g.edges)
    F = len(g.faces)
    n = 5 * E + 2  # T_hat (2E), s+, s-, side slacks (2E), edge slacks (E)
    m = 3 * E + F
    i_sp = 2 * E
    i_sn = 2 * E + 1
    i_u = 2 * E + 2
    i_w = 4 * E + 2
    A = np.zeros((m, n))
    b = np.zeros(m)
    # side rows: T_hat_t - (s+ - s-) - u_t = 0
    for t in range(2 * E):
        A[t, t] = 1.0
        A[t, i_sp] = -1.0
        A[t, i_sn] = 1.0
        A[t, i_u + t] = -1.0
    # edge rows: T_hat(e+) + T_hat(e-) + (s+ - s-) + w_e = 2 theta_e
    for i, e in enumerate(g.edges):
        r = 2 * E + i
        A[r, 2 * i] = 1.0
        A[r, 2 * i + 1] = 1.0
        A[r, i_sp] = 1.0
        A[r, i_sn] = -1.0
        A[r, i_w + i] = 1.0
        b[r] = 2.0 * e.theta
    # face rows: sum of T_hat over the face's sides = T_f
    T = target_array(g, targets)
    for fi, f in enumerate(g.faces):
        r = 3 * E + fi
        for eid, ori in f.boundary:
            t = 2 * g.edge_index[eid] + (0 if ori == "+" else 1)
            A[r, t] += 1.0
        b[r] = T[fi]
    c = np.zeros(n)
    c[i_sp] = -1.0  # maximize s = s+ - s-
    c[i_sn] = 1.0
    return A, b, c


def _certificate_from_duals(g, targets, duals):
    E = len(g.edges)
    F = len(g.faces)
    face_duals = duals[3 * E : 3 * E + F]
    face_ids = [f.id for f in g.faces]
    for order in (np.argsort(face_duals), np.argsort(-face_duals)):
        prefix = []
        for fi in order:
            prefix.append(face_ids[int(fi)])
            if subset_margin(g, targets, prefix) >= 0.0:
                return tuple(prefix)
    return None


def find_coherent_system(
    g: WeightedCellGraph, targets: CurvatureTarget
) -> FeasibilityResult:
    """Decide feasibility by slack maximization.

    Solves: maximize s subject to T_hat_t >= s for every side, T_hat(e+) +
    T_hat(e-) <= 2 theta_e - s per edge, and the face sum equalities. The
    targets are feasible exactly when the optimum s* is positive; the
    optimal T_hat then witnesses it. On infeasibility a violating face
    subset is extracted from the duals, falling back to exhaustive search
    for up to 20 faces.
    """
    E = len(g.edges)
    A, b, c = _build_lp(g, targets)
    res = simplex_solve(c, A, b)
    if res.status != "optimal":  # the LP is always feasible and bounded
        raise RuntimeError(f"feasibility LP ended with status {res.status}")
    s_star = float(res.x[2 * E] - res.x[2 * E + 1])
    if s_star > _VERDICT_TOL:
        values = {}
        for i, e in enumerate(g.edges):
            values[(e.id, "+")] = float(res.x[2 * i])
            values[(e.id, "-")] = float(res.x[2 * i + 1])
        side_min = min(values.values())
        gap_min = min(
            2.0 * e.theta - values[(e.id, "+")] - values[(e.id, "-")]
            for e in g.edges
        )
        return FeasibilityResult(
            feasible=True,
            system=CoherentSystem(values=values, slack=min(side_min, gap_min)),
            certificate=None,
            optimal_slack=s_star,
        )
    certificate = None
    if res.duals is not None:
        certificate = _certificate_from_duals(g, targets, res.duals)
    if certificate is None and len(g.faces) <= _MAX_EXHAUSTIVE_FACES:
        check = exhaustive_subset_check(g, targets)
        if not check.passes:
            certificate = check.worst_subset
    return FeasibilityResult(
        feasible=False,
        system=None,
        certificate=certificate,
        optimal_slack=s_star,
    )
