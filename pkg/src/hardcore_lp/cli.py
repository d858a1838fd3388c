"""Command-line front end.

Machine-readable output goes to stdout, diagnostics to stderr. Exit codes:
0 success, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import bounds, graph, hardcore, lp
from .hardcore import format_rational as fr

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_lambda(text: str) -> Fraction:
    try:
        lam = hardcore.parse_rational(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if lam <= 0:
        raise UsageError(f"fugacity must be positive, got {text!r}")
    return lam


def parse_lambdas(text: str) -> list[Fraction]:
    return [parse_lambda(t) for t in text.split(",") if t.strip()]


_FAMILY_TAGS = {
    "k": "complete",
    "e": "empty",
    "c": "cycle",
    "p": "path",
    "kdd": "biclique",
    "gp": "petersen-generalized",
    "t3": "t3",
}


def parse_family(tag: str, params: str) -> graph.FamilySpec:
    family = _FAMILY_TAGS.get(tag, tag)
    try:
        values = tuple(int(x) for x in params.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"malformed family parameters {params!r}") from None
    return graph.FamilySpec(family, values)


def load_graphs(spec: str) -> list[graph.Graph]:
    """Resolve a graph spec: family ("k:4", "gp:7,2", "t3"), "g6:<graph6>", or a file path."""
    try:
        if spec.startswith("g6:"):
            return [graph.parse_graph6(spec[3:])]
        tag, sep, params = spec.partition(":")
        if tag in _FAMILY_TAGS and (sep or tag == "t3"):
            return [graph.generate(parse_family(tag, params))]
        if os.path.exists(spec):
            with open(spec) as fh:
                return graph.read_graph6_lines(fh)
    except graph.GraphError as exc:
        raise UsageError(f"bad graph spec {spec!r}: {exc}") from None
    raise UsageError(f"bad graph spec {spec!r}: not a family, g6: string or existing file")


def _one_graph(spec: str) -> graph.Graph:
    graphs = load_graphs(spec)
    if len(graphs) != 1:
        raise UsageError(f"expected exactly one graph from {spec!r}, got {len(graphs)}")
    return graphs[0]


def _emit(obj, out) -> None:
    out.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _emit_csv(header: Sequence[str], rows: Sequence[Sequence], out) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    out.write(buf.getvalue())


def _fmt_float(x: float) -> str:
    return format(x, ".12g")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_indpoly(args, out) -> int:
    graphs = load_graphs(args.graph)
    polys = [hardcore.independence_polynomial(g) for g in graphs]
    if args.format == "csv":
        _emit_csv(["graph6", "coeffs"],
                  [[graph.write_graph6(g), " ".join(map(str, p.coeffs))] for g, p in zip(graphs, polys)],
                  out)
    elif len(polys) == 1:
        _emit(polys[0].to_json(), out)
    else:
        _emit([dict(graph6=graph.write_graph6(g), **p.to_json()) for g, p in zip(graphs, polys)], out)
    return EXIT_OK


def _lambda_list(args) -> list[Fraction]:
    if args.lambdas:
        return parse_lambdas(args.lambdas)
    return [parse_lambda(args.lam)]


def cmd_occupancy(args, out) -> int:
    g = _one_graph(args.graph)
    if g.n == 0:
        raise UsageError("occupancy fraction is undefined for the 0-vertex graph")
    reports = [hardcore.vertex_probabilities(g, lam) for lam in _lambda_list(args)]
    if args.format == "csv":
        _emit_csv(["lambda", "alpha", "alpha_float"],
                  [[fr(r.lam), fr(r.alpha), _fmt_float(float(r.alpha))] for r in reports], out)
    else:
        _emit([{
            "lambda": fr(r.lam),
            "alpha": fr(r.alpha),
            "p": [fr(v) for v in r.p],
            "q": [fr(v) for v in r.q],
        } for r in reports], out)
    return EXIT_OK


def cmd_ydist(args, out) -> int:
    g = _one_graph(args.graph)
    dists = [hardcore.y_distribution(g, lam) for lam in _lambda_list(args)]
    if args.format == "csv":
        _emit_csv(["lambda", "i", "y"],
                  [[fr(y.lam), i, fr(v)] for y in dists for i, v in enumerate(y.y)], out)
    else:
        _emit([{"lambda": fr(y.lam), "d": y.d, "y": [fr(v) for v in y.y]} for y in dists], out)
    return EXIT_OK


def cmd_hdist(args, out) -> int:
    g = _one_graph(args.graph)
    lam = parse_lambda(args.lam)
    dist = hardcore.local_graph_distribution(g, lam)
    residual = hardcore.neighborly_residual(dist, dist.d, lam)
    entries = [{"graph6": graph.write_graph6(h), "n": h.n, "probability": fr(p)}
               for h, p in dist.entries.values()]
    if args.format == "csv":
        _emit_csv(["graph6", "n", "probability"],
                  [[e["graph6"], e["n"], e["probability"]] for e in entries], out)
    else:
        _emit({"lambda": fr(lam), "d": dist.d, "entries": entries,
               "neighborly_residual": fr(residual)}, out)
    return EXIT_OK


def _build_lp(model: str, d: int, lam: Fraction) -> lp.LpProblem:
    if model == "general":
        return lp.build_lp_general(d, lam)
    if model == "tfree":
        return lp.build_lp_trianglefree(d, lam)
    if d != 3:
        raise UsageError("cubic model requires --d 3")
    return lp.build_lp_cubic(lam, bounds.t3_polynomial())


def cmd_lp(args, out) -> int:
    lam = parse_lambda(args.lam)
    try:
        problem = _build_lp(args.model, args.d, lam)
    except (lp.LpSizeError, lp.LpShapeError) as exc:
        raise UsageError(str(exc)) from None
    result: dict = {"problem": problem.to_json()}
    if args.dual:
        result["dual_problem"] = lp.dual_of(problem).to_json()
    sol = lp.simplex_solve(problem)
    result["solution"] = sol.to_json()
    code = EXIT_OK
    if args.certify:
        if sol.status != "optimal":
            result["certificate"] = {"holds": False, "reason": sol.status}
            code = EXIT_FAIL
        else:
            rep = lp.check_complementary_slackness(problem, sol.x, sol.duals)
            cert = {
                "holds": rep.holds,
                "primal_objective": fr(rep.primal_objective),
                "dual_objective": fr(rep.dual_objective),
                "report": rep.to_json(),
            }
            ok = rep.holds and rep.primal_objective == rep.dual_objective
            closed = None
            if args.model == "tfree":
                closed = bounds.tf_bound(args.d, lam).objective
            elif args.model == "cubic":
                closed = bounds.cubic_bound(lam).objective
            elif args.model == "general":
                closed = bounds.reference_occupancy("clique", args.d, lam)
            cert["closed_form_objective"] = fr(closed)
            ok = ok and closed == sol.objective
            cert["holds"] = ok
            result["certificate"] = cert
            code = EXIT_OK if ok else EXIT_FAIL
    _emit(result, out)
    return code


def _bound_record(model: str, d: int, lam: Fraction) -> dict:
    if model == "tfree":
        b = bounds.tf_bound(d, lam)
        return {
            "model": model, "d": d, "lambda": fr(lam), "branch": b.i,
            "y": [fr(v) for v in b.vector()],
            "dual": {"S": fr(b.S), "M": fr(b.M), "A": fr(b.A)},
            "objective": fr(b.objective),
            "alpha_bound": fr(b.y0),
            "alpha_bound_float": _fmt_float(float(b.y0)),
        }
    if d != 3:
        raise UsageError("cubic model requires --d 3")
    c = bounds.cubic_bound(lam)
    return {
        "model": model, "d": 3, "lambda": fr(lam), "Lambda": fr(c.big_lambda),
        "y": [fr(v) for v in c.y],
        "dual": {"S": fr(c.S), "M": fr(c.M), "A": fr(c.A), "B": fr(c.B)},
        "objective": fr(c.objective),
        "alpha_bound": fr(c.y0),
        "alpha_bound_float": _fmt_float(float(c.y0)),
    }


def cmd_bound(args, out) -> int:
    if args.d < 2:
        raise UsageError("--d must be at least 2")
    recs = [_bound_record(args.model, args.d, lam) for lam in _lambda_list(args)]
    if args.format == "csv":
        _emit_csv(["model", "d", "lambda", "alpha_bound", "alpha_bound_float"],
                  [[r["model"], r["d"], r["lambda"], r["alpha_bound"], r["alpha_bound_float"]]
                   for r in recs], out)
    else:
        _emit(recs[0] if len(recs) == 1 else recs, out)
    return EXIT_OK


def cmd_integrate(args, out) -> int:
    if args.tol <= 0 or args.lambda_max <= 0:
        raise UsageError("--tol and --lambda-max must be positive")
    if args.model == "cubic" and args.d != 3:
        raise UsageError("cubic model requires --d 3")
    value = bounds.log_partition_bound(args.model, args.d, args.lambda_max, args.tol)
    _emit({
        "model": args.model,
        "d": args.d,
        "lambda_max": _fmt_float(args.lambda_max),
        "tol": _fmt_float(args.tol),
        "log_bound": _fmt_float(value),
        "per_vertex_bound": _fmt_float(math.exp(value)),
    }, out)
    return EXIT_OK


def cmd_scan(args, out) -> int:
    graphs = load_graphs(args.input)
    lams = parse_lambdas(args.lambdas)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = [c for c in checks if c not in bounds.CHECKS]
    if unknown:
        raise UsageError(f"unknown check(s): {', '.join(unknown)}")
    report = bounds.scan_check(graphs, lams, checks, jobs=args.jobs)
    for index, g6, message in report.errors:
        print(f"graph {index} ({g6}): {message}", file=sys.stderr)
    if args.format == "csv":
        cols = ["graph_index", "graph6", "n", "d", "lambda", "check", "pass", "lhs", "rhs"]
        _emit_csv(cols, [[r.to_json()[c] if c != "pass" else str(r.passed).lower() for c in cols]
                         for r in report.records], out)
    else:
        _emit({
            "records": [r.to_json() for r in report.records],
            "errors": [{"graph_index": i, "graph6": g6, "message": m} for i, g6, m in report.errors],
            "passed": report.passed and not report.errors,
        }, out)
    if report.errors:
        return EXIT_USAGE
    if not report.passed:
        for r in report.failures():
            print(f"FAIL graph {r.graph_index} {r.check} lambda={fr(r.lam)}: {r.lhs} vs {r.rhs}",
                  file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_gen(args, out) -> int:
    if args.family == "cubic-tf":
        try:
            n = int(args.params)
            graphs = graph.naive_cubic_tf_corpus(n)
        except (ValueError, graph.GraphError) as exc:
            raise UsageError(str(exc)) from None
    else:
        try:
            graphs = [graph.generate(parse_family(args.family, args.params or ""))]
        except graph.GraphError as exc:
            raise UsageError(str(exc)) from None
    for g in graphs:
        out.write(graph.write_graph6(g) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hardcore-lp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def fmt(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")

    def lam_opts(p):
        p.add_argument("--lambda", dest="lam", default="1")
        p.add_argument("--lambdas", help="comma-separated list of p/q fugacities")

    p = sub.add_parser("indpoly", help="independence polynomial")
    p.add_argument("--graph", required=True)
    fmt(p)

    for name, helptext in (("occupancy", "occupancy fraction and vertex probabilities"),
                           ("ydist", "law of the uncovered-neighbor count")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--graph", required=True)
        lam_opts(p)
        fmt(p)

    p = sub.add_parser("hdist", help="law of the local graph H and neighborly residual")
    p.add_argument("--graph", required=True)
    p.add_argument("--lambda", dest="lam", default="1")
    fmt(p)

    p = sub.add_parser("lp", help="build and solve an occupancy LP")
    p.add_argument("--model", choices=("general", "tfree", "cubic"), required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--dual", action="store_true")
    p.add_argument("--certify", action="store_true")

    p = sub.add_parser("bound", help="closed-form occupancy lower bound")
    p.add_argument("--model", choices=("tfree", "cubic"), required=True)
    p.add_argument("--d", type=int, default=3)
    lam_opts(p)
    fmt(p)

    p = sub.add_parser("integrate", help="per-vertex log partition lower bound")
    p.add_argument("--model", choices=("tfree", "cubic"), required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--lambda-max", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("scan", help="check the bounds over a graph6 corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--lambdas", default="1/4,1,4")
    p.add_argument("--checks", default="main,djpr")
    p.add_argument("--jobs", type=int, default=1)
    fmt(p)

    p = sub.add_parser("gen", help="emit graph6 for a named family or the cubic corpus")
    p.add_argument("--family", required=True,
                   help="k, e, c, p, kdd, gp, t3 (or full family names) or cubic-tf")
    p.add_argument("--params", default="")
    return parser


COMMANDS = {
    "indpoly": cmd_indpoly,
    "occupancy": cmd_occupancy,
    "ydist": cmd_ydist,
    "hdist": cmd_hdist,
    "lp": cmd_lp,
    "bound": cmd_bound,
    "integrate": cmd_integrate,
    "scan": cmd_scan,
    "gen": cmd_gen,
}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (hardcore.PreconditionError, hardcore.UndefinedQuantityError, graph.GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
