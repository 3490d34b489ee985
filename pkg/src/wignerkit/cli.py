"""
Command-line interface.

Every verb reads JSON inputs and writes one JSON report.  Exit status is 0
on success, 1 when a check fails (the report is still written) and 2 on
input or usage errors.
"""

import argparse
import json
import os
import sys

from . import grassmann as gr
from .errors import (
    DescentError,
    DimensionMismatch,
    MissingRaysError,
    NotInducedByIsometry,
    NotOrthogonalityPreserving,
    PreconditionError,
    RankInstability,
    TableInconsistent,
    ToleranceBreakdown,
)
from .hilbert import DEFAULT_TOL, Ray, orthonormalize
from .io import (
    FormatError,
    dump_json,
    hypergraph_from_json,
    load_json,
    matrix_to_json,
    oracle_from_json,
    subspace_from_json,
    subspace_to_json,
    table_from_json,
)
from .measure import find_two_valued_measure, verify_assignment
from .projective import (
    Line,
    check_lineation,
    check_nondegenerate,
    check_orthogonality_preserving,
    lines_from_table,
)
from .reconstruct import (
    check_conditions_AB,
    classify_and_reconstruct,
    descend_full,
    verify_induced,
)
from .suite import ANCHORS, verify_suite

CHECK_FAILURES = (
    DescentError,
    NotInducedByIsometry,
    NotOrthogonalityPreserving,
    RankInstability,
    TableInconsistent,
    ToleranceBreakdown,
)
INPUT_ERRORS = (
    FormatError,
    DimensionMismatch,
    MissingRaysError,
    PreconditionError,
    ValueError,
    KeyError,
    TypeError,
    OSError,
)


class UsageError(Exception):
    pass


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("WIGNERKIT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"WIGNERKIT_SEED must be an integer, got {env!r}") from None


def _tol(args):
    return DEFAULT_TOL.replace(
        eps_rank=args.tol_rank,
        eps_orth=args.tol_orth,
        eps_eq=args.tol_eq,
        eps_angle=args.tol_angle,
        eps_reconstruct=args.tol_reconstruct,
    )


def _load(path):
    if path is None:
        raise UsageError("missing required input file")
    try:
        return load_json(path)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def _pair(args, tol):
    return subspace_from_json(_load(args.x), tol), subspace_from_json(_load(args.y), tol)


def cmd_angles(args, tol):
    x, y = _pair(args, tol)
    pa = gr.principal_angles(x, y, tol)
    return True, {"angles": pa.angles.tolist(), "marginal": pa.marginal(tol)}


def cmd_distance(args, tol):
    x, y = _pair(args, tol)
    d = gr.grassmann_distance(x, y, tol)
    pa = gr.principal_angles(x, y, tol)
    return True, {"distance": d, "k": x.k, "marginal": pa.marginal(tol)}


def cmd_geodesic(args, tol):
    x, y = _pair(args, tol)
    path = gr.geodesic(x, y, tol)
    nodes = path.nodes
    compatible = all(gr.is_compatible(a, b, tol) for i, a in enumerate(nodes) for b in nodes[i + 1:])
    valid = path.is_valid(tol)
    return valid, {
        "length": path.length,
        "nodes": [subspace_to_json(s) for s in nodes],
        "valid": valid,
        "pairwise_compatible": compatible,
    }


def cmd_compat(args, tol):
    x, y = _pair(args, tol)
    out = {"compatible": gr.is_compatible(x, y, tol), "commutator_norm": gr.commutator_norm(x, y)}
    if x.k == y.k:
        out["adjacent"] = gr.is_adjacent(x, y, tol)
        out["ortho_adjacent"] = gr.is_ortho_adjacent(x, y, tol)
        out["marginal"] = gr.principal_angles(x, y, tol).marginal(tol)
    return True, out


def cmd_clique(args, tol):
    anchor = subspace_from_json(_load(args.anchor), tol)
    clique = gr.max_compatible_clique(args.kind, anchor, tol)
    if args.kind == "top":
        k, expected = anchor.k - 1, anchor.k
    else:
        k, expected = anchor.k + 1, anchor.n - anchor.k
    pool = gr.clique_candidates(args.kind, anchor, args.samples, args.seed_value, tol)
    added = gr.extend_clique(args.kind, anchor, clique, pool, tol)
    ok = len(clique) == expected and not added
    return ok, {
        "kind": args.kind,
        "k": k,
        "size": len(clique),
        "expected_size": expected,
        "members": [subspace_to_json(s) for s in clique],
        "candidates_tried": len(pool),
        "extensions_found": len(added),
    }


def cmd_check_op(args, tol):
    rep = check_orthogonality_preserving(table_from_json(_load(args.table), tol), tol)
    return rep.passed, rep.to_dict()


def _lines_arg(args, table, tol):
    if args.lines is None:
        return lines_from_table(table, tol)
    out = []
    for idx in _load(args.lines):
        members = [table.sources[int(i)] for i in idx]
        out.append((Line(orthonormalize([m.vector for m in members], tol)), members))
    return out


def cmd_check_lineation(args, tol):
    table = table_from_json(_load(args.table), tol)
    lines = _lines_arg(args, table, tol)
    if not lines:
        raise PreconditionError("no line with at least 3 tabulated rays")
    lin = check_lineation(table, lines, tol)
    nd = check_nondegenerate(table, lines, tol)
    return lin.passed and nd.passed, {
        "lineation": lin.to_dict(),
        "nondegenerate": nd.to_dict(),
        "lines": len(lines),
    }


def cmd_reconstruct(args, tol):
    table = table_from_json(_load(args.table), tol)
    result = classify_and_reconstruct(table, tol=tol)
    rep = verify_induced(table, result, tol)
    out = result.to_dict()
    out["verification"] = rep.to_dict()
    return rep.passed, out


def cmd_descend(args, tol):
    f = oracle_from_json(_load(args.oracle), tol)
    result = descend_full(f, seed=args.seed_value, probes=args.probes, tol=tol)
    ab = check_conditions_AB(f, args.samples, args.seed_value, tol)
    out = result.to_dict()
    out["conditions"] = ab.to_dict()
    return ab.passed, out


def cmd_ks_search(args, tol):
    h = hypergraph_from_json(_load(args.rays), tol)
    res = find_two_valued_measure(h, seed=args.seed_value if args.shuffle else None)
    out = res.to_dict()
    out.update({"rays": h.size, "contexts": len(h.contexts), "edges": len(h.edges)})
    if res.sat:
        out["verified"] = verify_assignment(h, res.assignment)
        return out["verified"], out
    return True, out


def cmd_verify_suite(args, tol):
    if not args.dims:
        raise UsageError("--dims needs at least one n,k pair")
    try:
        dims = [tuple(int(v) for v in d.split(",")) for d in args.dims]
    except ValueError:
        raise UsageError("--dims entries look like 5,2") from None
    if any(len(d) != 2 for d in dims):
        raise UsageError("--dims entries look like 5,2")
    out = verify_suite(args.seed_value, dims, args.trials, args.inject_fault, tol)
    return out["pass"], out


COMMANDS = {
    "angles": cmd_angles,
    "distance": cmd_distance,
    "geodesic": cmd_geodesic,
    "compat": cmd_compat,
    "clique": cmd_clique,
    "check-op": cmd_check_op,
    "check-lineation": cmd_check_lineation,
    "reconstruct": cmd_reconstruct,
    "descend": cmd_descend,
    "ks-search": cmd_ks_search,
    "verify-suite": cmd_verify_suite,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-rank", type=float)
    common.add_argument("--tol-orth", type=float)
    common.add_argument("--tol-eq", type=float)
    common.add_argument("--tol-angle", type=float)
    common.add_argument("--tol-reconstruct", type=float)
    common.add_argument("--seed", type=int, help="defaults to $WIGNERKIT_SEED, then 0")
    common.add_argument("--probes", type=int, default=3)
    common.add_argument("--samples", type=int, default=200)
    common.add_argument("--out", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="wignerkit", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for verb in ("angles", "distance", "geodesic", "compat"):
        p = sub.add_parser(verb, parents=[common])
        p.add_argument("--x", required=True)
        p.add_argument("--y", required=True)
    p = sub.add_parser("clique", parents=[common])
    p.add_argument("--kind", choices=["star", "top"], required=True)
    p.add_argument("--anchor", required=True)
    p = sub.add_parser("check-op", parents=[common])
    p.add_argument("--table", required=True)
    p = sub.add_parser("check-lineation", parents=[common])
    p.add_argument("--table", required=True)
    p.add_argument("--lines", help="JSON list of lists of table source indices")
    p = sub.add_parser("reconstruct", parents=[common])
    p.add_argument("--table", required=True)
    p = sub.add_parser("descend", parents=[common])
    p.add_argument("--oracle", required=True)
    p = sub.add_parser("ks-search", parents=[common])
    p.add_argument("--rays", required=True)
    p.add_argument("--shuffle", action="store_true", help="seeded random variable order")
    p = sub.add_parser("verify-suite", parents=[common])
    p.add_argument("--dims", nargs="*", default=["5,2", "7,3"], help="n,k pairs with 2k < n")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--inject-fault", choices=ANCHORS)
    return parser


def _emit(report, path):
    text = dump_json(report, path)
    if path is None:
        print(text)


def run(argv=None):
    """Parse ``argv``, run one command, and return ``(exit_status, report)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (0 if exc.code == 0 else 2), None
    report = {"command": args.command}
    try:
        tol = _tol(args)
        args.seed_value = _seed(args)
        report.update({"seed": args.seed_value, "tolerances": tol.as_dict()})
        ok, body = COMMANDS[args.command](args, tol)
        report.update(body)
        report["pass"] = bool(ok)
        status = 0 if ok else 1
    except CHECK_FAILURES as exc:
        report.update({"pass": False, "error": str(exc)})
        report["violations"] = [_jsonable(exc.details)]
        status = 1
    except (UsageError, *INPUT_ERRORS) as exc:
        report.update({"pass": False, "error": str(exc)})
        status = 2
    _emit(report, args.out)
    return status, report


def _jsonable(obj):
    from .reconstruct import ReconstructionResult

    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, ReconstructionResult):
        return obj.to_dict()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Ray):
        return matrix_to_json(obj.vector)
    return obj


def main(argv=None):
    status, _ = run(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
