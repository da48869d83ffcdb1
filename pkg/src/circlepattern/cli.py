"""Command-line interface: feasibility check, solve, verify, net export.

Exit codes are a stable contract: 0 success, 1 input error, 2 infeasible
targets, 3 non-convergence, 4 audit failure. All numbers in emitted
documents are written with 17 significant digits and dictionary keys are
sorted, so a rerun with the same inputs produces byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .cellgraph import (
    graph_to_dict,
    parse_graph,
    parse_targets,
    resolve_face_key,
)
from .errors import (
    AuditError,
    ConvergenceError,
    GraphValidationError,
    InfeasibleTargetsError,
    ParseError,
)
from .feasibility import exhaustive_subset_check, find_coherent_system
from .geometry import (
    DEFAULT_AUDIT_TOLS,
    audit_residuals,
    export_net,
    reconstruct,
)
from .solver import solve, total_curvatures

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_AUDIT = 4

_DEFAULT_TOL = 1e-10
_DEFAULT_MAX_ITER = 100


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation parameters for one subcommand run."""

    command: str
    input: str
    targets: str | None
    tol: float
    max_iter: int
    seed: int | None
    skip_feasibility: bool
    output: str | None
    threads: int

    def __post_init__(self):
        if not self.tol > 0.0:
            raise ParseError(f"--tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ParseError(f"--max-iter must be at least 1, got {self.max_iter}")
        if self.threads < 1:
            raise ParseError(f"--threads must be at least 1, got {self.threads}")


# -- canonical document writing ---------------------------------------------


def _emit(obj, out):
    if isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(
            sorted(((str(k), v) for k, v in obj.items()), key=lambda kv: kv[0])
        ):
            if i:
                out.append(", ")
            out.append(json.dumps(key))
            out.append(": ")
            _emit(value, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, value in enumerate(obj):
            if i:
                out.append(", ")
            _emit(value, out)
        out.append("]")
    elif isinstance(obj, float):
        out.append(format(obj, ".17g"))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif obj is None:
        out.append("null")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    out = []
    _emit(obj, out)
    return "".join(out)


# -- I/O helpers ------------------------------------------------------------


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_targets(g, source):
    if source is None:
        raise ParseError("--targets is required for this command")
    if source.lstrip().startswith("{"):
        return parse_targets(g, source)
    return parse_targets(g, _read_text(source))


def _write_document(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
    else:
        sys.stdout.write(text)
        sys.stdout.write("\n")


def _load_solution_document(path):
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in solution document: {exc}") from exc
    try:
        g = parse_graph(doc["graph"])
        targets = parse_targets(g, doc["targets"])
        raw_K = doc["solution"]["K"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed solution document: {exc!r}") from exc
    K = {}
    for key, value in raw_K.items():
        fid = resolve_face_key(g, key)
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"K for face {fid!r} must be a number")
        K[fid] = float(value)
    missing = [f.id for f in g.faces if f.id not in K]
    if missing:
        raise ParseError(f"solution document missing K for faces {missing!r}")
    return doc, g, targets, K


def _metric_to_dict(m, g):
    return {
        "radii": {str(f): v for f, v in m.radii.items()},
        "quads": {
            str(e): {
                "r_plus": q.r_plus,
                "r_minus": q.r_minus,
                "r3": q.r3,
                "half_angle_plus": q.half_angle_plus,
                "half_angle_minus": q.half_angle_minus,
                "ell_plus": q.ell_plus,
                "ell_minus": q.ell_minus,
                "T_plus": q.T_plus,
                "T_minus": q.T_minus,
                "area": q.area,
            }
            for e, q in m.quads.items()
        },
        "center_cone_angles": {str(f): v for f, v in m.center_cone_angles.items()},
        "vertex_cone_angles": {str(v): a for v, a in m.vertex_cone_angles.items()},
        "face_areas": {str(f): v for f, v in m.face_areas.items()},
        "total_area": m.total_area,
        "euler_characteristic": g.euler_characteristic,
    }


def _note_threads(config):
    if config.threads > 1:
        print(
            f"note: --threads {config.threads} requested; computation runs "
            "deterministically on one thread, output equal to a single-thread "
            "run within 1e-12 (here: byte-identical)",
            file=sys.stderr,
        )


# -- subcommands ------------------------------------------------------------


def cmd_check(config: RunConfig) -> int:
    """Feasibility verdict with slack and certificate."""
    g = parse_graph(_read_text(config.input))
    targets = _load_targets(g, config.targets)
    _note_threads(config)
    result = find_coherent_system(g, targets)
    if len(g.faces) <= 20:
        sub = exhaustive_subset_check(g, targets)
        if sub.passes != result.feasible:
            print(
                "note: exhaustive subset check disagrees with the linear "
                "program (targets sit at the feasibility boundary); the "
                "conservative verdict below stands",
                file=sys.stderr,
            )
    print(f"verdict: {'feasible' if result.feasible else 'infeasible'}")
    print(f"optimal slack: {format(result.optimal_slack, '.17g')}")
    if result.feasible:
        return EXIT_OK
    if result.certificate is None:
        print("certificate: none found (face count exceeds exhaustive range)")
    else:
        print(f"certificate: {list(result.certificate)}")
    return EXIT_INFEASIBLE


def cmd_solve(config: RunConfig) -> int:
    """Solve for K*, reconstruct the metric, and emit a solution document."""
    g = parse_graph(_read_text(config.input))
    targets = _load_targets(g, config.targets)
    _note_threads(config)
    report = solve(
        g,
        targets,
        tol=config.tol,
        max_iter=config.max_iter,
        skip_feasibility=config.skip_feasibility,
    )
    m = reconstruct(g, report.K_star)
    audit = audit_residuals(m, g)
    for name, tol in DEFAULT_AUDIT_TOLS.items():
        if audit[name] > tol:
            raise AuditError(
                f"{name} identity residual {audit[name]:.3e} exceeds {tol:.1e}"
            )
    document = {
        "graph": graph_to_dict(g),
        "targets": {str(f): t for f, t in targets.targets.items()},
        "solution": {
            "K": {str(f): v for f, v in report.K_star.items()},
            "radii": {str(f): v for f, v in report.radii.items()},
            "achieved_T": {str(f): v for f, v in report.achieved_T.items()},
            "iterations": report.iterations,
            "final_residual": report.final_residual,
        },
        "metric": _metric_to_dict(m, g),
        "audit": audit,
        "config": {
            "tol": config.tol,
            "max_iter": config.max_iter,
            "skip_feasibility": config.skip_feasibility,
            "threads": config.threads,
            "seed": config.seed,
        },
    }
    _write_document(canonical_json(document), config.output)
    print(
        f"solved in {report.iterations} iterations, residual "
        f"{format(report.final_residual, '.3e')}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    """Recompute audits and the target match from a solution document."""
    doc, g, targets, K = _load_solution_document(config.input)
    _note_threads(config)
    m = reconstruct(g, K)
    residuals = audit_residuals(m, g)
    totals = total_curvatures(g, K)
    target_res = max(
        abs(totals[f.id] - targets.targets[f.id]) for f in g.faces
    )
    # the document's own solve tolerance governs the target match unless
    # --tol was set to something else on the command line
    target_tol = config.tol
    if config.tol == _DEFAULT_TOL:
        stored = doc.get("config", {}).get("tol")
        if isinstance(stored, (int, float)) and not isinstance(stored, bool):
            target_tol = float(stored)
    checks = [(name, residuals[name], DEFAULT_AUDIT_TOLS[name]) for name in residuals]
    checks.append(("target match", target_res, target_tol))
    failing = []
    for name, value, tol in checks:
        status = "ok" if value <= tol else "FAIL"
        print(f"{name}: residual {format(value, '.17g')} (tol {tol:.1e}) {status}")
        if value > tol:
            failing.append((value / tol, name, value, tol))
    if failing:
        _, name, value, tol = max(failing)
        print(
            f"audit failure: {name} residual {value:.3e} exceeds {tol:.1e}",
            file=sys.stderr,
        )
        return EXIT_AUDIT
    return EXIT_OK


def cmd_export(config: RunConfig) -> int:
    """Write the quadrilateral net for a solution document."""
    _doc, g, _targets, K = _load_solution_document(config.input)
    _note_threads(config)
    m = reconstruct(g, K)
    _write_document(canonical_json(export_net(m, g)), config.output)
    return EXIT_OK


_COMMANDS = {
    "check": cmd_check,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "export": cmd_export,
}

# -- argument parsing -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit 2; this contract reserves 2 for
    infeasibility, so usage errors become exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _add_common(p):
    p.add_argument("--input", required=True, help="input document path ('-' for stdin)")
    p.add_argument(
        "--targets",
        help="curvature targets: a JSON file path, or inline JSON starting with '{'",
    )
    p.add_argument("--tol", type=float, default=_DEFAULT_TOL, help="residual tolerance")
    p.add_argument(
        "--max-iter", type=int, default=_DEFAULT_MAX_ITER, help="Newton iteration cap"
    )
    p.add_argument(
        "--skip-feasibility",
        action="store_true",
        help="skip the feasibility gate before solving",
    )
    p.add_argument(
        "--threads",
        type=int,
        default=1,
        help="thread count (runs on one thread either way; kept for the interface)",
    )
    p.add_argument("--output", help="write the emitted document here instead of stdout")
    p.add_argument(
        "--seed",
        type=int,
        help="seed for randomized self-tests; recorded in the output document",
    )


def _build_parser():
    parser = _Parser(
        prog="circlepattern",
        description="Circle patterns with spherical conical metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    commands = {
        "check": "decide whether curvature targets are feasible",
        "solve": "compute the pattern and write a solution document",
        "verify": "re-audit a solution document",
        "export": "write the glued-quadrilateral net for a solution document",
    }
    for name, help_text in commands.items():
        _add_common(sub.add_parser(name, help=help_text))
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = RunConfig(
            command=args.command,
            input=args.input,
            targets=args.targets,
            tol=args.tol,
            max_iter=args.max_iter,
            seed=args.seed,
            skip_feasibility=args.skip_feasibility,
            output=args.output,
            threads=args.threads,
        )
        return _COMMANDS[config.command](config)
    except (ParseError, GraphValidationError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InfeasibleTargetsError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ConvergenceError as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except AuditError as exc:
        print(f"audit failure: {exc}", file=sys.stderr)
        return EXIT_AUDIT


if __name__ == "__main__":
    sys.exit(main())
