"""Spherical bigon trigonometry in log-curvature coordinates.

A bigon of angle theta in (0, pi/2] is the overlap of two convex spherical
disks. Its shape is parametrized by (K1, K2), where K_i = log cot r_i is the
log geodesic curvature of disk i. This module computes the forward geometry
(radii, sector angles, arc lengths, side curvatures, area), its exact
derivatives, the primitive of the curvature one-form T1 dK1 + T2 dK2, and the
inverse map from prescribed side curvatures back to (K1, K2).

All formulas are closed-form and finite for every real (K1, K2); only exp of
the coordinate difference appears, so evaluation stays exact in floating
point for |K1 - K2| up to roughly 700.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, QuadratureError

_HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class BigonShape:
    """One spherical bigon of angle theta at coordinates (K1, K2).

    Fields follow the triangle decomposition of the bigon: each side i lies
    on the boundary of disk i (radius r_i), subtends half sector angle
    alpha_half_i at the disk center, has arc length ell_i and total geodesic
    curvature T_i = ell_i * cot(r_i). r3 is the distance between the two
    disk centers and area = 2*theta - T1 - T2 is the bigon's spherical area.
    """

    theta: float
    theta_prime: float
    K1: float
    K2: float
    k1: float
    k2: float
    r1: float
    r2: float
    r3: float
    alpha_half1: float
    alpha_half2: float
    ell1: float
    ell2: float
    T1: float
    T2: float
    area: float


@dataclass(frozen=True)
class BigonJacobian:
    """Partial derivatives of (T1, T2) with respect to (K1, K2).

    The matrix is symmetric with strictly negative off-diagonal entries and
    is positive definite everywhere; it is the Hessian block contributed by
    one bigon to the pattern functional.
    """

    dT1_dK1: float
    dT1_dK2: float
    dT2_dK1: float
    dT2_dK2: float

    def as_matrix(self) -> np.ndarray:
        return np.array(
            [[self.dT1_dK1, self.dT1_dK2], [self.dT2_dK1, self.dT2_dK2]]
        )


def _check_theta(theta):
    th = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(th)) or np.any(th <= 0.0) or np.any(th > _HALF_PI):
        raise DomainError(f"theta must lie in (0, pi/2], got {theta}")


def shape_arrays(theta, K1, K2):
    """Vectorized forward geometry.

    Accepts scalars or broadcastable arrays and returns the tuple
    (r1, r2, r3, alpha_half1, alpha_half2, T1, T2) as ndarrays. This is the
    single evaluation path for bigon geometry; `bigon_from_K`, the solver's
    curvature assembly, and the metric reconstruction all call it.
    """
    theta = np.asarray(theta, dtype=float)
    K1 = np.asarray(K1, dtype=float)
    K2 = np.asarray(K2, dtype=float)
    st = np.sin(theta)
    ct = np.cos(theta)
    r1 = np.arctan(np.exp(-K1))
    r2 = np.arctan(np.exp(-K2))
    s1, c1 = np.sin(r1), np.cos(r1)
    s2, c2 = np.sin(r2), np.cos(r2)
    # cot(alpha'_1) = (k2 sin r1 - cos r1 cos theta') / sin theta' with
    # theta' = pi - theta; using k2 sin r1 = cos r1 * exp(K2 - K1) keeps the
    # numerator finite when either K alone would overflow exp.
    with np.errstate(over="ignore"):
        ap1 = np.arctan2(st, c1 * (np.exp(K2 - K1) + ct))
        ap2 = np.arctan2(st, c2 * (np.exp(K1 - K2) + ct))
    T1 = 2.0 * ap1 * c1
    T2 = 2.0 * ap2 * c2
    # cosine law for the center distance; clip guards rounding at the
    # degenerate ends of the admissible interval (|r1-r2|, r1+r2).
    cos_r3 = np.clip(c1 * c2 - s1 * s2 * ct, -1.0, 1.0)
    r3 = np.arccos(cos_r3)
    return r1, r2, r3, ap1, ap2, T1, T2


def jacobian_arrays(theta, K1, K2):
    """Vectorized derivatives of (T1, T2) in (K1, K2).

    Returns (dT1_dK1, dT1_dK2, dT2_dK1, dT2_dK2). The two off-diagonal
    entries are evaluated by their own closed forms (one per side), so their
    agreement is a genuine consistency check rather than a shared formula.
    """
    theta = np.asarray(theta, dtype=float)
    K1 = np.asarray(K1, dtype=float)
    K2 = np.asarray(K2, dtype=float)
    st = np.sin(theta)
    ct = np.cos(theta)
    r1 = np.arctan(np.exp(-K1))
    r2 = np.arctan(np.exp(-K2))
    s1, c1 = np.sin(r1), np.cos(r1)
    s2, c2 = np.sin(r2), np.cos(r2)
    with np.errstate(over="ignore"):
        E21 = np.exp(K2 - K1)
        E12 = np.exp(K1 - K2)
        ap1 = np.arctan2(st, c1 * (E21 + ct))
        ap2 = np.arctan2(st, c2 * (E12 + ct))
        sa1 = np.sin(ap1)
        sa2 = np.sin(ap2)
        # d(T1)/dK2 = k1 k2 * d(ell1)/dk2 = -2 k1 k2 sin^2 r1 sin^2 a'_1 / sin theta',
        # rewritten with k1 k2 sin^2 r1 = cos^2 r1 * exp(K2 - K1).
        d12 = -2.0 * E21 * c1 * c1 * sa1 * sa1 / st
        d21 = -2.0 * E12 * c2 * c2 * sa2 * sa2 / st
        # Diagonal: differentiate T1 = 2 a'_1 cos r1 through the cotangent
        # formula with dr/dK = -sin r cos r.
        d11 = (
            2.0 * c1 * c1 * sa1 * sa1 * (E21 * c1 * c1 - s1 * s1 * ct) / st
            + 2.0 * ap1 * s1 * s1 * c1
        )
        d22 = (
            2.0 * c2 * c2 * sa2 * sa2 * (E12 * c2 * c2 - s2 * s2 * ct) / st
            + 2.0 * ap2 * s2 * s2 * c2
        )
    return d11, d12, d21, d22


def bigon_from_K(theta: float, K1: float, K2: float) -> BigonShape:
    """Construct the unique bigon of angle theta at coordinates (K1, K2).

    theta must lie in (0, pi/2]; K1, K2 may be any finite reals. Raises
    DomainError otherwise.
    """
    _check_theta(theta)
    if not (math.isfinite(K1) and math.isfinite(K2)):
        raise DomainError(f"K coordinates must be finite, got ({K1}, {K2})")
    r1, r2, r3, ap1, ap2, T1, T2 = (
        float(x) for x in shape_arrays(theta, K1, K2)
    )
    theta = float(theta)
    return BigonShape(
        theta=theta,
        theta_prime=math.pi - theta,
        K1=float(K1),
        K2=float(K2),
        k1=math.exp(K1),
        k2=math.exp(K2),
        r1=r1,
        r2=r2,
        r3=r3,
        alpha_half1=ap1,
        alpha_half2=ap2,
        ell1=2.0 * ap1 * math.sin(r1),
        ell2=2.0 * ap2 * math.sin(r2),
        T1=T1,
        T2=T2,
        area=2.0 * theta - T1 - T2,
    )


def bigon_jacobian(b: BigonShape) -> BigonJacobian:
    """Exact derivatives of (T1, T2) in (K1, K2) for the given bigon."""
    d11, d12, d21, d22 = jacobian_arrays(b.theta, b.K1, b.K2)
    return BigonJacobian(
        dT1_dK1=float(d11),
        dT1_dK2=float(d12),
        dT2_dK1=float(d21),
        dT2_dK2=float(d22),
    )


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _segment_integral(theta, K1, K2, panels):
    # Integrate T1*K1 + T2*K2 over u in [0, 1] along u -> (u*K1, u*K2),
    # Gauss-Legendre order 16 on each of `panels` equal panels.
    edges = np.linspace(0.0, 1.0, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 / panels
    u = (mid[:, None] + half * _GL_NODES[None, :]).ravel()
    _, _, _, _, _, T1, T2 = shape_arrays(theta, u * K1, u * K2)
    vals = (T1 * K1 + T2 * K2).reshape(panels, -1)
    return float(half * np.sum(vals @ _GL_WEIGHTS))


def primitive_value(
    theta: float, K1: float, K2: float, tol: float = 1e-10, max_depth: int = 12
) -> float:
    """Primitive of the one-form T1 dK1 + T2 dK2, based at the origin.

    Integrates along the straight segment from (0, 0) to (K1, K2) with
    fixed-order Gauss-Legendre panels, doubling the panel count until two
    successive estimates agree to `tol` absolute. The one-form is closed, so
    the fixed canonical path makes values reproducible bit for bit.
    """
    _check_theta(theta)
    if not (math.isfinite(K1) and math.isfinite(K2)):
        raise DomainError(f"K coordinates must be finite, got ({K1}, {K2})")
    if K1 == 0.0 and K2 == 0.0:
        return 0.0
    prev = _segment_integral(theta, K1, K2, 1)
    for depth in range(1, max_depth + 1):
        cur = _segment_integral(theta, K1, K2, 2**depth)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise QuadratureError(
        f"primitive quadrature did not settle to {tol} within "
        f"{max_depth} refinements at (theta={theta}, K=({K1}, {K2}))"
    )


def bigon_from_totals(theta: float, T1: float, T2: float) -> BigonShape:
    """Invert the side curvatures: find the bigon with prescribed (T1, T2).

    (T1, T2) must lie in the open triangle T1 > 0, T2 > 0, T1 + T2 < 2*theta;
    raises DomainError on or outside its boundary. Solves by damped Newton
    from the symmetric start K = (0, 0) using the exact Jacobian; the
    residual sup-norm at return is below 1e-12 (in practice near machine
    precision).
    """
    _check_theta(theta)
    if not (math.isfinite(T1) and math.isfinite(T2)):
        raise DomainError(f"totals must be finite, got ({T1}, {T2})")
    if T1 <= 0.0 or T2 <= 0.0 or T1 + T2 >= 2.0 * theta:
        raise DomainError(
            f"totals ({T1}, {T2}) outside the open triangle "
            f"T1, T2 > 0, T1 + T2 < 2*theta = {2.0 * theta}"
        )
    target = np.array([T1, T2])
    K = np.zeros(2)
    best_K = K.copy()
    best_res = math.inf
    for _ in range(60):
        _, _, _, _, _, t1, t2 = shape_arrays(theta, K[0], K[1])
        F = np.array([float(t1), float(t2)]) - target
        res = float(np.abs(F).max())
        if res < best_res:
            best_res = res
            best_K = K.copy()
        if res == 0.0:
            break
        d11, d12, d21, d22 = (
            float(x) for x in jacobian_arrays(theta, K[0], K[1])
        )
        J = np.array([[d11, d12], [d21, d22]])
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            break
        # Cap the step: an unguarded Newton step near the degenerate corners
        # of the totals triangle can jump into the far flat region where all
        # derivatives underflow and the iteration cannot recover.
        cap = float(np.abs(step).max())
        if cap > 4.0:
            step *= 4.0 / cap
        norm_F = float(np.linalg.norm(F))
        t = 1.0
        accepted = False
        for _ in range(60):
            K_new = K + t * step
            _, _, _, _, _, t1n, t2n = shape_arrays(theta, K_new[0], K_new[1])
            F_new = np.array([float(t1n), float(t2n)]) - target
            if np.all(np.isfinite(F_new)) and float(
                np.linalg.norm(F_new)
            ) <= (1.0 - 1e-4 * t) * norm_F:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        K = K + t * step
        if float(np.abs(t * step).max()) < 1e-15 and res < 1e-10:
            break
    if best_res > 1e-12:
        raise ConvergenceError(
            f"totals inversion stalled at residual {best_res:.3e} for "
            f"(theta={theta}, T=({T1}, {T2}))"
        )
    return bigon_from_K(theta, float(best_K[0]), float(best_K[1]))
