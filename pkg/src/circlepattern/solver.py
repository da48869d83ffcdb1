"""Damped Newton minimization of the pattern functional.

The functional Omega(K) = sum over edges of the bigon primitive minus the
linear target term is strictly convex on R^F; its gradient at K is
(T(boundary of D_f) - T_f) per face and its Hessian is assembled from the
2x2 bigon Jacobian blocks, one per edge. The solver drives the gradient to
zero with Newton steps and a backtracking line search on half the squared
gradient norm, so quadrature error in the primitive never enters the
iteration.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .bigon import jacobian_arrays, primitive_value, shape_arrays
from .cellgraph import CurvatureTarget, WeightedCellGraph, target_array
from .errors import ConvergenceError, InfeasibleTargetsError
from .feasibility import find_coherent_system

_DENSE_LIMIT = 512
_ARMIJO = 1e-4
_MIN_STEP = 2.0**-30
_STEP_CAP = 4.0


@dataclass
class SolverState:
    """One Newton iterate, exposed for diagnostics and failure reports."""

    K: dict
    gradient: dict
    hessian: object
    omega_value: float | None
    iteration: int
    residual_norm: float


@dataclass
class SolveReport:
    """Converged solution with the achieved curvatures."""

    K_star: dict
    radii: dict
    achieved_T: dict
    iterations: int
    final_residual: float
    wall_time: float
    residual_history: list


def _K_array(g, K):
    if isinstance(K, dict):
        return np.array([float(K[f.id]) for f in g.faces])
    arr = np.asarray(K, dtype=float)
    if arr.shape != (len(g.faces),):
        raise ValueError(
            f"K must have one entry per face ({len(g.faces)}), got shape {arr.shape}"
        )
    return arr.copy()


def _totals_array(g, K_arr):
    _, _, _, _, _, T1, T2 = shape_arrays(
        g.theta_array, K_arr[g.side_face_plus], K_arr[g.side_face_minus]
    )
    totals = np.zeros(len(g.faces))
    np.add.at(totals, g.side_face_plus, T1)
    np.add.at(totals, g.side_face_minus, T2)
    return totals


def total_curvatures(g: WeightedCellGraph, K) -> dict:
    """Total geodesic curvature T(boundary of D_f) per face at K.

    Each edge contributes the two side curvatures of its bigon to the faces
    carrying its sides (both to the same face if the sides coincide there).
    """
    totals = _totals_array(g, _K_array(g, K))
    return {f.id: float(totals[i]) for i, f in enumerate(g.faces)}


def _hessian_parts(g, K_arr):
    d11, d12, d21, d22 = jacobian_arrays(
        g.theta_array, K_arr[g.side_face_plus], K_arr[g.side_face_minus]
    )
    rows = np.concatenate(
        [g.side_face_plus, g.side_face_plus, g.side_face_minus, g.side_face_minus]
    )
    cols = np.concatenate(
        [g.side_face_plus, g.side_face_minus, g.side_face_plus, g.side_face_minus]
    )
    vals = np.concatenate([d11, d12, d21, d22])
    return rows, cols, vals


def _build_hessian(g, K_arr):
    F = len(g.faces)
    rows, cols, vals = _hessian_parts(g, K_arr)
    if F <= _DENSE_LIMIT:
        H = np.zeros((F, F))
        np.add.at(H, (rows, cols), vals)
    else:
        H = scipy.sparse.coo_matrix((vals, (rows, cols)), shape=(F, F)).tocsr()
    return H


def _assemble(g, K_arr, T_target):
    return _totals_array(g, K_arr) - T_target, _build_hessian(g, K_arr)


def assemble_gradient_hessian(g: WeightedCellGraph, K, targets: CurvatureTarget):
    """Gradient and Hessian of the functional at K.

    The gradient maps face ids to T(boundary of D_f) - T_f; the Hessian is a
    dense array for up to 512 faces and a CSR matrix beyond that. Both sides
    of a loop-carrying face fold all four Jacobian entries into the single
    diagonal element.
    """
    K_arr = _K_array(g, K)
    grad, H = _assemble(g, K_arr, target_array(g, targets))
    return {f.id: float(grad[i]) for i, f in enumerate(g.faces)}, H


def omega_value(g: WeightedCellGraph, K, targets: CurvatureTarget) -> float:
    """Value of the functional (primitive sum minus the linear term).

    Diagnostic only; the solver never consumes this.
    """
    K_arr = _K_array(g, K)
    total = 0.0
    for i, e in enumerate(g.edges):
        total += primitive_value(
            e.theta,
            float(K_arr[g.side_face_plus[i]]),
            float(K_arr[g.side_face_minus[i]]),
        )
    total -= float(target_array(g, targets) @ K_arr)
    return total


def _newton_direction(H, grad):
    if isinstance(H, np.ndarray):
        chol = scipy.linalg.cho_factor(H, check_finite=False)
        return -scipy.linalg.cho_solve(chol, grad, check_finite=False)
    precond = scipy.sparse.diags(1.0 / H.diagonal())
    d, info = scipy.sparse.linalg.cg(H, -grad, M=precond, rtol=1e-12, atol=0.0)
    if info != 0:
        raise np.linalg.LinAlgError(f"conjugate gradient stopped with info={info}")
    return d


def solve(
    g: WeightedCellGraph,
    targets: CurvatureTarget,
    tol: float = 1e-10,
    max_iter: int = 100,
    initial_K=None,
    skip_feasibility: bool = False,
    track_omega: bool = False,
) -> SolveReport:
    """Find the unique K* with T(boundary of D_f) = T_f for all faces.

    Runs the feasibility gate first (raising InfeasibleTargetsError with a
    certificate when it fails) unless skip_feasibility is set, then damped
    Newton from all-zero K (radii pi/4) or the supplied start. Terminates
    when the gradient sup-norm drops to tol. Non-convergence raises
    ConvergenceError whose `report` attribute holds the last state.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be at least 1, got {max_iter}")
    t0 = time.perf_counter()
    if not skip_feasibility:
        verdict = find_coherent_system(g, targets)
        if not verdict.feasible:
            raise InfeasibleTargetsError(
                f"targets are infeasible (LP slack {verdict.optimal_slack:.3e}); "
                f"certificate: {verdict.certificate}",
                certificate=verdict.certificate,
                slack=verdict.optimal_slack,
            )
    T_target = target_array(g, targets)
    K = np.zeros(len(g.faces)) if initial_K is None else _K_array(g, initial_K)

    grad, H = _assemble(g, K, T_target)
    merit = 0.5 * float(grad @ grad)
    residual = float(np.abs(grad).max())
    history = [residual]
    iterations = 0

    def _report():
        K_dict = {f.id: float(K[i]) for i, f in enumerate(g.faces)}
        radii = {f.id: float(np.arctan(np.exp(-K[i]))) for i, f in enumerate(g.faces)}
        achieved = _totals_array(g, K)
        return SolveReport(
            K_star=K_dict,
            radii=radii,
            achieved_T={f.id: float(achieved[i]) for i, f in enumerate(g.faces)},
            iterations=iterations,
            final_residual=residual,
            wall_time=time.perf_counter() - t0,
            residual_history=history,
        )

    def _fail(reason):
        err = ConvergenceError(
            f"{reason} (iteration {iterations}, residual {residual:.3e})"
        )
        err.report = _report()
        err.state = SolverState(
            K={f.id: float(K[i]) for i, f in enumerate(g.faces)},
            gradient={f.id: float(grad[i]) for i, f in enumerate(g.faces)},
            hessian=H,
            omega_value=omega_value(g, K, targets) if track_omega else None,
            iteration=iterations,
            residual_norm=residual,
        )
        return err

    while residual > tol:
        if iterations >= max_iter:
            raise _fail(f"no convergence within {max_iter} iterations")
        try:
            direction = _newton_direction(H, grad)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
            raise _fail("Hessian solve broke down") from None
        # a full Newton step from a flat region can overshoot into the
        # opposite flat region and still pass Armijo there; bound the move
        # so the iterate stays where the Hessian carries information
        scale = 1.0
        biggest = float(np.abs(direction).max())
        if biggest > _STEP_CAP:
            scale = _STEP_CAP / biggest
            direction = direction * scale
        step = 1.0
        accepted = False
        while step >= _MIN_STEP:
            K_new = K + step * direction
            grad_new = _totals_array(g, K_new) - T_target
            if np.all(np.isfinite(grad_new)):
                merit_new = 0.5 * float(grad_new @ grad_new)
                # Armijo for the merit: the directional derivative along the
                # (possibly rescaled) Newton direction is -2 * scale * merit
                if merit_new <= merit * (1.0 - 2.0 * _ARMIJO * scale * step):
                    accepted = True
                    break
            step *= 0.5
        if not accepted:
            raise _fail("line search reached the minimum step")
        K = K_new
        grad = grad_new
        merit = merit_new
        residual = float(np.abs(grad).max())
        history.append(residual)
        iterations += 1
        H = _build_hessian(g, K)
    return _report()
