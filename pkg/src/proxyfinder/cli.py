"""Command-line entry point: ``proxyfinder (solve|compare|gen-vc|scenario|estimate|bench)``.

Exit codes: 0 success or feasible, 1 usage/validation/file error,
2 estimator or size error, 3 infeasible (solve only).
"""

from __future__ import annotations

import argparse
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .estimation import EMPIRICAL, EXACT, EstimatorConfig, UncertaintyEstimator
from .exceptions import EstimationError, SizeError, UnsupportedExactError, ValidationError
from .reductions import Graph, encode_vertex_cover, read_edge_file
from .scenarios import build_scenario, scenario_names
from .serialize import FORMAT_VERSION, dumps, instance_to_json, load_scenario, save_scenario
from .solvers import (
    DEFAULT_EXHAUSTIVE_CAP,
    compare,
    random_batch,
    solve_decision,
    solve_exact_min,
    solve_greedy,
    verify,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ESTIMATOR = 2
EXIT_INFEASIBLE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_source(p, required=True):
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--scenario", metavar="FILE", help="scenario JSON file")
    src.add_argument("--name", choices=scenario_names(), help="catalog scenario")


def _add_estimator(p):
    p.add_argument("--estimator", choices=[EXACT, EMPIRICAL], help="override the scenario's estimator mode")
    p.add_argument("--samples", type=int, help="sample count for empirical estimation")
    p.add_argument("--seed", type=int, help="seed for catalog scenarios and empirical estimation")


def _add_output(p):
    p.add_argument("--out", metavar="FILE", help="write the JSON report here")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of a summary")
    p.add_argument("-q", "--quiet", action="store_true", help="suppress the human-readable summary")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="proxyfinder", description="Discover API-proxy subsets for a target attribute.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("--mode", choices=["exact", "greedy", "decision"], default="greedy")
    _add_source(p)
    p.add_argument("--alpha", type=float, help="uncertainty threshold in bits")
    p.add_argument("--k", type=int, help="subset size bound (decision mode)")
    _add_estimator(p)
    p.add_argument("--jobs", type=int, default=1, help="threads for candidate evaluation")
    p.add_argument("--cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP, help="largest function count for exhaustive search")
    _add_output(p)

    p = sub.add_parser("compare", help="greedy versus exact minimum on a batch")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenarios", metavar="DIR", help="directory of scenario JSON files")
    src.add_argument("--random", type=int, metavar="N", help="number of random instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP)
    _add_output(p)

    p = sub.add_parser("gen-vc", help="encode a vertex-cover instance as a scenario")
    p.add_argument("--edges", required=True, metavar="FILE", help="edge list, one 'u v' pair per line")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--num-vertices", type=int, help="defaults to the largest vertex id + 1")
    p.add_argument("--out", metavar="FILE", help="write the scenario here instead of stdout")

    p = sub.add_parser("scenario", help="catalog scenarios")
    ssub = p.add_subparsers(dest="scenario_command", required=True, parser_class=_Parser)
    e = ssub.add_parser("export", help="write a catalog scenario as JSON")
    e.add_argument("--name", required=True, choices=scenario_names())
    e.add_argument("--out", required=True, metavar="FILE")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--alpha", type=float)
    ssub.add_parser("list", help="list catalog scenarios")

    p = sub.add_parser("estimate", help="uncertainty report for a fixed subset")
    _add_source(p)
    p.add_argument("--subset", default="", help="comma-separated function indices, e.g. 0,2")
    _add_estimator(p)
    _add_output(p)

    p = sub.add_parser("bench", help="time greedy and exact solvers on random instances")
    p.add_argument("--random", type=int, default=20, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    _add_output(p)
    return parser


def _load(args):
    if args.scenario:
        path = Path(args.scenario)
        if not path.is_file():
            raise FileNotFoundError(f"scenario file not found: {path}")
        inst = load_scenario(path)
    else:
        inst = build_scenario(args.name, seed=args.seed if args.seed is not None else 0)
    changes = {}
    if getattr(args, "alpha", None) is not None:
        changes["alpha"] = args.alpha
    if getattr(args, "k", None) is not None:
        changes["k"] = args.k
    if args.estimator is not None or args.samples is not None or (args.seed is not None and args.scenario):
        est = inst.estimator
        changes["estimator"] = EstimatorConfig(
            mode=args.estimator or est.mode,
            samples=args.samples if args.samples is not None else est.samples,
            seed=args.seed if args.seed is not None else est.seed,
            kind=est.kind,
            on_label=est.on_label,
            off_label=est.off_label,
            indicators=est.indicators,
        )
    return inst.replace(**changes) if changes else inst


def _emit(args, report: dict, summary: str) -> None:
    text = dumps(report)
    if args.out:
        Path(args.out).write_text(text)
    if args.json:
        sys.stdout.write(text)
    elif not args.quiet:
        print(summary)


def _instance_header(inst) -> dict:
    return {
        "name": inst.name,
        "target": inst.target,
        "alpha": inst.alpha,
        "k": inst.k,
        "n_functions": len(inst.functions),
        "estimator": inst.estimator.to_json(),
    }


def cmd_solve(args) -> int:
    inst = _load(args)
    if args.mode == "exact":
        result = solve_exact_min(inst, cap=args.cap, n_jobs=args.jobs)
    elif args.mode == "decision":
        if inst.k is None:
            raise UsageError("decision mode needs --k or a scenario with 'k'")
        result = solve_decision(inst, cap=args.cap, n_jobs=args.jobs)
    else:
        result = solve_greedy(inst, n_jobs=args.jobs)
    ok = verify(inst, result)
    report = {
        "format_version": FORMAT_VERSION,
        "command": "solve",
        "instance": _instance_header(inst),
        "result": result.to_json(),
        "verified": ok,
    }
    if result.feasible:
        names = ", ".join(inst.function_names[i] for i in result.subset) or "(empty set)"
        subset_line = f"  subset: [{', '.join(map(str, result.subset))}] {names}\n"
        verdict = "feasible"
    else:
        subset_line = "  no subset meets the threshold\n"
        verdict = "infeasible"
    summary = (
        f"{inst.name or 'instance'}: {result.method} -> {verdict}\n"
        f"{subset_line}"
        f"  uncertainty: {result.achieved_uncertainty_bits:.6f} bits (alpha {inst.alpha:.6f})\n"
        f"  estimator calls: {result.estimator_calls}"
    )
    _emit(args, report, summary)
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def cmd_compare(args) -> int:
    if args.scenarios:
        folder = Path(args.scenarios)
        if not folder.is_dir():
            raise FileNotFoundError(f"scenario directory not found: {folder}")
        files = sorted(folder.glob("*.json"))
        if not files:
            raise UsageError(f"no *.json scenarios in {folder}")
        instances = [load_scenario(f) for f in files]
        source = {"scenarios": [f.name for f in files]}
    else:
        if args.random < 1:
            raise UsageError("--random needs a positive count")
        instances = random_batch(args.random, args.seed)
        source = {"random": args.random, "seed": args.seed}
    table = compare(instances, cap=args.cap, n_jobs=args.jobs)
    report = {"format_version": FORMAT_VERSION, "command": "compare", "source": source, **table}
    agg = table["aggregate"]
    lines = [f"{'instance':<24} {'greedy':>6} {'exact':>6} {'ratio':>6}"]
    for row in table["rows"]:
        ratio = "-" if row["ratio"] is None else f"{row['ratio']:.2f}"
        g = row["greedy"]["size"] if row["greedy"]["feasible"] else "inf"
        e = row["exact"]["size"] if row["exact"]["feasible"] else "inf"
        lines.append(f"{row['name']:<24} {g!s:>6} {e!s:>6} {ratio:>6}")
    fmt = lambda v: "-" if v is None else f"{v:.4f}"  # noqa: E731
    lines.append(
        f"{agg['n_instances']} instances, {agg['n_feasible']} feasible, {agg['n_mismatch']} mismatches, "
        f"max ratio {fmt(agg['max_ratio'])}, mean ratio {fmt(agg['mean_ratio'])}"
    )
    _emit(args, report, "\n".join(lines))
    return EXIT_OK


def cmd_gen_vc(args) -> int:
    edges = read_edge_file(args.edges)
    n = args.num_vertices
    if n is None:
        n = max((max(e) for e in edges), default=0) + 1
    inst = encode_vertex_cover(Graph(n, tuple(edges)), args.k)
    inst = inst.replace(name=Path(args.edges).stem)
    text = dumps(instance_to_json(inst))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_scenario(args) -> int:
    if args.scenario_command == "list":
        for name in scenario_names():
            print(name)
        return EXIT_OK
    params = {"alpha": args.alpha} if args.alpha is not None else {}
    inst = build_scenario(args.name, seed=args.seed, **params)
    save_scenario(inst, args.out)
    print(f"wrote {args.name} to {args.out}")
    return EXIT_OK


def _parse_subset(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"--subset must be comma-separated integers, got {text!r}") from None


def cmd_estimate(args) -> int:
    inst = _load(args)
    report = UncertaintyEstimator(inst).report(_parse_subset(args.subset))
    out = {"format_version": FORMAT_VERSION, "command": "estimate", "instance": _instance_header(inst), "report": report.to_json()}
    summary = (
        f"U = {report.value_bits:.6f} bits, H(target) = {report.base_entropy_bits:.6f} bits, "
        f"I = {report.mutual_information_bits:.6f} bits ({report.mode}, {report.kind})"
    )
    _emit(args, out, summary)
    return EXIT_OK


def cmd_bench(args) -> int:
    instances = random_batch(args.random, args.seed)
    rows = []
    for inst in instances:
        t0 = time.perf_counter()
        g = solve_greedy(inst, n_jobs=args.jobs)
        t1 = time.perf_counter()
        e = solve_exact_min(inst, n_jobs=args.jobs)
        t2 = time.perf_counter()
        rows.append(
            {
                "name": inst.name,
                "n_functions": len(inst.functions),
                "greedy_seconds": t1 - t0,
                "exact_seconds": t2 - t1,
                "greedy_calls": g.estimator_calls,
                "exact_calls": e.estimator_calls,
            }
        )
    report = {
        "format_version": FORMAT_VERSION,
        "command": "bench",
        "source": {"random": args.random, "seed": args.seed},
        "rows": rows,
        "timing": {"generated_at": datetime.now(timezone.utc).isoformat()},
    }
    tg = sum(r["greedy_seconds"] for r in rows)
    te = sum(r["exact_seconds"] for r in rows)
    summary = f"{len(rows)} instances: greedy {tg:.3f}s total, exact {te:.3f}s total"
    _emit(args, report, summary)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "compare": cmd_compare,
    "gen-vc": cmd_gen_vc,
    "scenario": cmd_scenario,
    "estimate": cmd_estimate,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # --help, --version and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SizeError, UnsupportedExactError, EstimationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATOR


run = main

if __name__ == "__main__":
    sys.exit(main())
