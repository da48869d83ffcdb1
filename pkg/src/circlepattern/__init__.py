"""Circle patterns with spherical conical metrics.

Given a weighted cellular graph on a closed surface (edge weights in
(0, pi/2]) and prescribed total geodesic curvatures per face, this package
decides feasibility by linear programming, computes the unique pattern by
convex minimization over the label coordinates K_f = log cot r_f, and
reconstructs the metric as glued geodesic quadrilaterals with Gauss-Bonnet
audits.
"""
from .bigon import (
    BigonJacobian,
    BigonShape,
    bigon_from_K,
    bigon_from_totals,
    jacobian_arrays,
    primitive_value,
    shape_arrays,
)
from .cellgraph import (
    CurvatureTarget,
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
from .errors import (
    AuditError,
    CirclePatternError,
    ConvergenceError,
    DomainError,
    GraphValidationError,
    InfeasibleTargetsError,
    ParseError,
    QuadratureError,
    SubsetSizeError,
)
from .feasibility import (
    CoherentSystem,
    FeasibilityResult,
    SubsetCheckResult,
    exhaustive_subset_check,
    find_coherent_system,
    subset_margin,
)
from .geometry import (
    PatternMetric,
    QuadRecord,
    audit_residuals,
    check_audit,
    export_net,
    face_boundary_curvatures,
    reconstruct,
)
from .simplex import SimplexResult, simplex_solve
from .solver import (
    SolveReport,
    SolverState,
    assemble_gradient_hessian,
    omega_value,
    solve,
    total_curvatures,
)

__version__ = "0.1.0"

__all__ = [
    "AuditError",
    "BigonJacobian",
    "BigonShape",
    "CirclePatternError",
    "CoherentSystem",
    "ConvergenceError",
    "CurvatureTarget",
    "DomainError",
    "EdgeRec",
    "FaceRec",
    "FeasibilityResult",
    "GraphValidationError",
    "InfeasibleTargetsError",
    "ParseError",
    "PatternMetric",
    "QuadRecord",
    "QuadratureError",
    "SimplexResult",
    "SolveReport",
    "SolverState",
    "SubsetCheckResult",
    "SubsetSizeError",
    "WeightedCellGraph",
    "assemble_gradient_hessian",
    "audit_residuals",
    "bigon_from_K",
    "bigon_from_totals",
    "check_audit",
    "exhaustive_subset_check",
    "export_net",
    "face_boundary_curvatures",
    "find_coherent_system",
    "graph_to_dict",
    "jacobian_arrays",
    "omega_value",
    "oriented_edges",
    "parse_graph",
    "parse_targets",
    "primitive_value",
    "reconstruct",
    "serialize_graph",
    "shape_arrays",
    "simplex_solve",
    "solve",
    "subset_margin",
    "target_array",
    "total_curvatures",
    "vertex_cone_angles",
]
