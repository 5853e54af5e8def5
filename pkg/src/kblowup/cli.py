"""Command-line scenario runner.

    kblowup run [SCENARIO] [--suite NAME ...] [--truncation N] [--seed S]
                [--report {text,structured,both}] [--out DIR] [--jobs J]
    kblowup list-suites
    kblowup dump-default

Exit status: 0 when every check passes, 1 when some check fails (the report
is still written), 2 for usage or scenario errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import __version__
from .report import SCHEMA_VERSION, Report, render_text
from .scenario import SUITES, Scenario, ScenarioError, default_scenario_text, load_default, load_scenario
from .suites import Context, run_check

SUITE_HELP = {
    "kernel": "Laurent arithmetic, lambda-ring generating functions, h_n and chi(P^n) oracles",
    "serre": "pushforwards of O(d) along projectivizations vs the Koszul oracle",
    "vanishing": "blow-up pieces vs Rees pieces, exact for d > -r and sharp at d = -r",
    "lattice": "fiber-sequence identities of the W_(a,b) lattice",
    "comparison": "pushforward of the blow-up structure sheaf and its filtration",
    "rees-presentation": "bigraded character of the Rees algebra presentation",
    "diagonal": "diagonal telescope under both twist conventions",
    "localization": "virtual inverse Euler classes and virtual localization",
    "approx": "approximation formula along blow-up sequences",
}

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _job(args):
    sc, suite, params, ctx, index = args
    return run_check(sc, suite, params, ctx, index)


def execute(sc: Scenario, suites: list[str] | None = None, truncation: int | None = None,
            seed: int | None = None, jobs: int = 1) -> list[Report]:
    """Run the scenario's checks (optionally filtered by suite) in file order."""
    ctx = Context(truncation=sc.truncation if truncation is None else truncation,
                  seed=sc.seed if seed is None else seed)
    specs = [c for c in sc.checks if not suites or c.suite in suites]
    work = [(sc, c.suite, c.params, ctx, c.index) for c in specs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_job, work))
    else:
        results = [_job(w) for w in work]
    return results


def structured(sc: Scenario, reports: list[Report], ctx: Context, full_classes: bool, timings: bool) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "tool_version": __version__,
        "scenario": {"source": sc.source, "sha256": sc.sha256, "torus_rank": sc.torus_rank},
        "seed": ctx.seed,
        "truncation": ctx.truncation,
        "status": "pass" if all(r.passed for r in reports) else "fail",
        "suites": [r.to_dict(full_classes, timings) for r in reports],
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kblowup", description="Exact verification of K-theoretic blow-up identities.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command")

    run = sub.add_parser("run", help="run a scenario file (default: the built-in scenario)")
    run.add_argument("scenario", nargs="?", help="TOML scenario file; omit for the built-in scenario")
    run.add_argument("--suite", action="append", choices=SUITES, metavar="NAME",
                     help="run only this suite (repeatable)")
    run.add_argument("--truncation", type=int, default=None, metavar="N",
                     help="q-truncation order for graded checks (default: scenario value, else 12)")
    run.add_argument("--seed", type=int, default=None, metavar="S",
                     help="seed for randomized grids (default: scenario value, else 0)")
    run.add_argument("--report", choices=("text", "structured", "both"), default="both")
    run.add_argument("--out", default=".", metavar="DIR", help="directory for report.txt / report.json")
    run.add_argument("--jobs", type=int, default=1, metavar="J", help="worker processes")
    run.add_argument("--timings", action="store_true", help="include wall times (reports stop being reproducible)")
    run.add_argument("--full-classes", action="store_true",
                     help="serialize both classes of passing checks too (failing checks always carry them)")
    run.add_argument("--quiet", action="store_true", help="do not echo the text report")
    run.add_argument("--list-suites", action="store_true", help="print suite names and exit")

    sub.add_parser("list-suites", help="print suite names")
    sub.add_parser("dump-default", help="print the built-in scenario")
    return p


def _list_suites() -> int:
    for name in SUITES:
        print(f"{name:18s} {SUITE_HELP[name]}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_USAGE
    if args.command == "list-suites" or getattr(args, "list_suites", False):
        return _list_suites()
    if args.command == "dump-default":
        sys.stdout.write(default_scenario_text())
        return EXIT_OK

    if args.truncation is not None and not 0 <= args.truncation <= 20:
        parser.error("--truncation must lie in [0, 20]")
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    try:
        sc = load_scenario(args.scenario) if args.scenario else load_default()
    except ScenarioError as exc:
        print(f"kblowup: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.truncation is not None:
        sc = replace(sc, truncation=args.truncation)
    if args.seed is not None:
        sc = replace(sc, seed=args.seed)
    ctx = Context(sc.truncation, sc.seed)

    try:
        reports = execute(sc, args.suite, jobs=args.jobs)
    except (ValueError, ArithmeticError) as exc:
        print(f"kblowup: check aborted: {exc}", file=sys.stderr)
        return EXIT_USAGE

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    header = [
        f"kblowup {__version__} report",
        f"scenario: {sc.source} (sha256 {sc.sha256})",
        f"seed: {ctx.seed}  truncation: {ctx.truncation}",
    ]
    text = render_text(reports, header, args.timings)
    if args.report in ("text", "both"):
        (out / "report.txt").write_text(text, encoding="utf-8")
    if args.report in ("structured", "both"):
        doc = structured(sc, reports, ctx, args.full_classes, args.timings)
        (out / "report.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if not args.quiet:
        sys.stdout.write(text)
    failed = [(r.suite, c) for r in reports for c in r.failures()]
    if failed:
        suite, first = failed[0]
        print(f"kblowup: {len(failed)} failing check(s); first: [{suite}] {first.name}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
