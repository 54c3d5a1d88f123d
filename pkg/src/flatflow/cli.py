"""Command line interface.

    flatflow run <plan> [--format human|json] [--out FILE] [--figures DIR]
    flatflow validate <plan>
    flatflow fixtures list
    flatflow fixtures show <name>

Results go to stdout, diagnostics to stderr.  Exit codes: 0 success,
2 schema errors, 3 computation errors.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .errors import ComputationError, PlanError
from .plan import parse_plan
from .runner import emit_report, run_plan

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_COMPUTATION = 3


def fixture_names() -> list[str]:
    root = resources.files("flatflow") / "fixtures"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def fixture_text(name: str) -> str:
    path = resources.files("flatflow") / "fixtures" / f"{name}.json"
    if not path.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path.read_text()


def _load_plan_text(arg: str) -> str:
    p = Path(arg)
    if p.exists():
        return p.read_text()
    try:
        return fixture_text(arg)
    except FileNotFoundError:
        raise PlanError(f"plan file not found: {arg}")


def _cmd_run(args) -> int:
    try:
        plan = parse_plan(_load_plan_text(args.plan))
    except PlanError as exc:
        print(f"plan error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    report = run_plan(plan)
    text = emit_report(report, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.figures:
        from .figures import render_figures

        files = render_figures(report, Path(args.figures))
        for f in files:
            print(f"wrote {f}", file=sys.stderr)
    if not report.ok:
        for t in report.tasks:
            if t.error:
                print(f"task {t.task_id}: {t.error}", file=sys.stderr)
        return EXIT_COMPUTATION
    return EXIT_OK


def _cmd_validate(args) -> int:
    try:
        plan = parse_plan(_load_plan_text(args.plan))
    except PlanError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    print(
        f"ok: {len(plan.tasks)} task(s), "
        f"{len(plan.presentations)} presentation(s), "
        f"{len(plan.representations)} representation(s), {len(plan.paths)} path(s)"
    )
    return EXIT_OK


def _cmd_fixtures(args) -> int:
    if args.action == "list":
        for name in fixture_names():
            print(name)
        return EXIT_OK
    if not args.name:
        print("fixtures show requires a name", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        sys.stdout.write(fixture_text(args.name))
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_SCHEMA
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatflow",
        description="Spectral flow, rho and Chern-Simons invariants of flat "
        "SU(2) representations from declarative plans.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a plan and print the report")
    run.add_argument("plan", help="plan file path or bundled fixture name")
    run.add_argument("--format", choices=("human", "json"), default="human")
    run.add_argument("--out", help="write the report to a file instead of stdout")
    run.add_argument(
        "--figures",
        metavar="DIR",
        help="also render figures and results.csv into DIR",
    )
    run.set_defaults(func=_cmd_run)

    val = sub.add_parser("validate", help="check a plan without running it")
    val.add_argument("plan")
    val.set_defaults(func=_cmd_validate)

    fix = sub.add_parser("fixtures", help="list or show bundled plans")
    fix.add_argument("action", choices=("list", "show"))
    fix.add_argument("name", nargs="?")
    fix.set_defaults(func=_cmd_fixtures)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ComputationError as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    except PlanError as exc:
        print(f"plan error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
