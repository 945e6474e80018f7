"""Command line: ``fuzzytvs check | demo | list-checks``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on a
configuration or I/O error.
"""
from __future__ import annotations

import argparse
import sys

from . import __version__
from .demos import DEMOS, run_demo
from .runner import CHECKS, emit_report, run_checks
from .scenario import ScenarioError, load_scenario

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzytvs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fuzzytvs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def output_options(p):
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")

    check = sub.add_parser("check", help="run the checks of a scenario file")
    check.add_argument("scenario", help="YAML or JSON scenario file")
    output_options(check)

    demo = sub.add_parser("demo", help="run a built-in demonstration")
    demo.add_argument("name", help=" | ".join(DEMOS))
    demo.add_argument("--points", type=float, nargs="+", metavar="X",
                      help="sample points of the point evaluations (polynomial-deltas)")
    output_options(demo)

    sub.add_parser("list-checks", help="list the check types a scenario may request")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list-checks":
        width = max(map(len, CHECKS))
        for name, spec in CHECKS.items():
            print(f"{name:<{width}}  {spec.summary}")
        return EXIT_OK

    try:
        if args.command == "check":
            report = run_checks(load_scenario(args.scenario))
        else:
            if args.name not in DEMOS:
                print(f"error: unknown demo '{args.name}' (choose from {', '.join(DEMOS)})",
                      file=sys.stderr)
                return EXIT_CONFIG
            report = run_demo(args.name, args.points)
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        emit_report(report, args.format, args.out)
    except OSError as exc:
        print(f"error: cannot write report to {args.out}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_CONFIG
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
