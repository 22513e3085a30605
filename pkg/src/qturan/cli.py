"""Command-line front end.

Exit codes encode outcomes: 0 = free/pass, 1 = witness found or a failed
bound, 2 = usage or input error, 3 = capacity exceeded, 4 = trial budget
exhausted.  Every output is a deterministic function of the subcommand,
its flags and the seed.
"""

from __future__ import annotations

import argparse
import os
import sys
from math import sqrt
from pathlib import Path

from . import bounds, construction, cube, detector

EXIT_FREE = 0
EXIT_WITNESS = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_EXHAUSTED = 4


def _report_lines(reports, fmt: str) -> str:
    if fmt == "csv":
        return bounds.reports_to_csv(list(reports))
    rows = [("n", "r", "scope", "achieved", "ambient", "ratio", "bound", "pass")]
    for rep in reports:
        rows.append(
            (
                str(rep.n),
                "" if rep.r is None else str(rep.r),
                rep.scope,
                str(rep.achieved_edges),
                str(rep.ambient_edges),
                f"{float(rep.ratio):.6f}",
                rep.bound_name,
                "pass" if rep.passed else "FAIL",
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(f"{c:<{w}}" for c, w in zip(row, widths)) for row in rows) + "\n"


def _cmd_construct(args) -> int:
    result = construction.find_good_assignment(args.n, args.r, args.seed, args.trials)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    assignment_path = out / f"assignment_n{args.n}_r{args.r}.txt"
    layer_path = out / f"layer_n{args.n}_r{args.r}.txt"
    assignment_path.write_text(construction.format_assignment(result.assignment))
    layer_path.write_text(construction.format_layer_graph(result.graph))
    layer = cube.LayerId(args.n, args.r)
    report = bounds.make_report(
        args.n, args.r, "layer", result.edges, cube.layer_edge_count(layer), "c/2"
    )
    sys.stdout.write(_report_lines([report], args.format))
    sys.stderr.write(
        f"wrote {assignment_path} and {layer_path} after {result.trials} trial(s)\n"
    )
    return EXIT_FREE if report.passed else EXIT_WITNESS


def _load_graph(path: Path) -> detector.CubeSubgraph:
    text = path.read_text()
    if "# lower" in text:
        g = construction.parse_layer_graph(text)
        return detector.subgraph_of_layer(g)
    n, edges = cube.parse_edge_list(text)
    vertices = {v for edge in edges for v in edge}
    return detector.CubeSubgraph.explicit(n, vertices, edges)


def _cmd_verify(args) -> int:
    graph = _load_graph(Path(args.path))
    if args.target == "c6minus":
        witness = detector.find_c6_minus(graph, workers=args.workers)
    else:
        length = int(args.target[1:])
        witness = detector.find_cycle_generic(graph, length, workers=args.workers)
    if witness is None:
        sys.stdout.write(f"{args.target}-free\n")
        return EXIT_FREE
    sys.stdout.write(detector.witness_line(witness) + "\n")
    return EXIT_WITNESS


def _cmd_pipeline(args) -> int:
    certificate = None
    if args.coloring is not None:
        certificate = bounds.parse_coloring(Path(args.coloring).read_text())
    try:
        suite = bounds.density_report_suite(
            args.n,
            args.seed,
            certificate=certificate,
            max_trials=args.trials,
            workers=args.workers,
        )
    except bounds.SuiteExhausted as exc:
        sys.stdout.write(_report_lines(exc.partial_reports, args.format))
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_EXHAUSTED
    reports = list(suite.reports)
    pipeline = suite.pipeline
    if certificate is None and args.budget is not None:
        # no external certificate: try the experimental search on this union
        found = bounds.search_coloring_small_n(
            suite.union, args.budget, seed=construction.derive_seed(args.seed, 1 << 32)
        )
        if found is None:
            sys.stderr.write(f"no coloring found within budget {args.budget}\n")
        else:
            pipeline = bounds.c10_pipeline(suite.union, found, workers=args.workers)
            if pipeline.report is not None:
                reports.append(pipeline.report)
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for r, assignment in sorted(suite.assignments.items()):
            (out / f"assignment_n{args.n}_r{r}.txt").write_text(
                construction.format_assignment(assignment)
            )
            (out / f"layer_n{args.n}_r{r}.txt").write_text(
                construction.format_layer_graph(suite.union.layers[r])
            )
    sys.stdout.write(_report_lines(reports, args.format))
    all_pass = all(rep.passed for rep in reports)
    if certificate is not None and (pipeline is None or not pipeline.success):
        for k, witness in sorted(pipeline.witnesses.items()):
            sys.stderr.write(f"class {k}: {detector.witness_line(witness)}\n")
        return EXIT_WITNESS
    return EXIT_FREE if all_pass else EXIT_WITNESS


def _parse_r_spec(spec: str) -> list[int]:
    values = []
    for part in spec.split(","):
        if ":" in part:
            lo, hi = part.split(":", 1)
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    if not values or any(r < 1 for r in values):
        raise ValueError(f"bad dimension spec {spec!r}")
    return values


def _cmd_stats(args) -> int:
    sys.stdout.write("r,n,trials,successes,empirical,exact,exact_float,z,within_4_sigma\n")
    for r in _parse_r_spec(args.r):
        n = 2 * r
        x = (1 << (r - 1)) - 1
        y = (1 << r) - 1
        hits = 0
        for t in range(args.trials):
            a = construction.sample_assignment(n, r, construction.derive_seed(args.seed, t))
            if construction.member_lower(a, x) and construction.member_upper(a, y):
                hits += 1
        exact = construction.edge_probability_closed_form(r)
        p = float(exact)
        freq = hits / args.trials
        sigma = sqrt(p * (1 - p) / args.trials)
        z = 0.0 if sigma == 0 else (freq - p) / sigma
        ok = "true" if abs(z) <= 4 else "false"
        sys.stdout.write(
            f"{r},{n},{args.trials},{hits},{freq:.6f},"
            f"{exact.numerator}/{exact.denominator},{p:.6f},{z:+.3f},{ok}\n"
        )
    return EXIT_FREE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qturan",
        description="Dense C6-free layer subgraphs of the hypercube: "
        "construction, verification and density reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="sample one layer graph beating the c/2 bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=512)
    p.add_argument("--out", default=".")
    p.add_argument("--format", choices=("text", "csv"), default="csv")
    p.set_defaults(func=_cmd_construct)

    default_workers = os.cpu_count() or 1

    p = sub.add_parser("verify", help="search an exported graph for a forbidden subgraph")
    p.add_argument("path")
    p.add_argument("--target", choices=("c4", "c6", "c6minus", "c10"), required=True)
    p.add_argument("--workers", type=int, default=default_workers)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("pipeline", help="layer + union (+ certificate) density reports")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coloring", help="path to a 3-coloring certificate of E(Q_n)")
    p.add_argument("--budget", type=int, help="search for a certificate when none is supplied")
    p.add_argument("--trials", type=int, default=512)
    p.add_argument("--workers", type=int, default=default_workers)
    p.add_argument("--out", help="directory for assignment and layer artifacts")
    p.add_argument("--format", choices=("text", "csv"), default="csv")
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("stats", help="Monte Carlo edge survival vs the closed form")
    p.add_argument("--r", default="2:5", help="dimension spec, e.g. '3', '2:5' or '2,4'")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except cube.CapacityError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CAPACITY
    except construction.TrialsExhausted as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_EXHAUSTED
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
