"""Command-line front end.

    chiralqubit fig <fig1|...|fig5> --out DIR [options]
    chiralqubit run --config FILE --out DIR [options]
    chiralqubit verify --suite {kernels,jc,paths,all}

Options shared by ``fig`` and ``run``: --tolerance (ODE relative tolerance),
--strategy {resonant,quadrature}, --include-nl, --include-lamb,
--path {ode,analytic,both}.
"""

from __future__ import annotations

import argparse
import sys

from ._version import __version__
from .scenarios import FIGURES, ConfigError, run_config, run_figure
from .verify import format_reports, run_suite


def _add_run_options(parser: argparse.ArgumentParser):
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--tolerance", type=float, default=None,
                        help="override the ODE relative tolerance")
    parser.add_argument("--strategy", choices=("resonant", "quadrature"), default=None,
                        help="override the occupation strategy")
    parser.add_argument("--include-nl", action="store_true",
                        help="enable the cross-channel superoperator")
    parser.add_argument("--include-lamb", action="store_true",
                        help="enable the Lamb-shift Hamiltonian")
    parser.add_argument("--path", choices=("ode", "analytic", "both"), default=None,
                        help="override the evolution path")


def _overrides(args) -> dict:
    return {
        "tolerance": args.tolerance,
        "strategy": args.strategy,
        "include_nl": args.include_nl,
        "include_lamb_shift": args.include_lamb,
        "path": args.path,
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="chiralqubit",
        description="Non-Markovian decoherence of a driven chiral spin qubit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("fig", help="reproduce a named figure scenario")
    fig.add_argument("name", choices=FIGURES)
    _add_run_options(fig)

    run = sub.add_parser("run", help="run a configuration file")
    run.add_argument("--config", required=True, help="JSON configuration file")
    _add_run_options(run)

    ver = sub.add_parser("verify", help="run the independent oracle suites")
    ver.add_argument("--suite", choices=("kernels", "jc", "paths", "all"),
                     default="all")

    args = parser.parse_args(argv)
    try:
        if args.command == "fig":
            files = run_figure(args.name, args.out, **_overrides(args))
            for path in files:
                print(path)
            return 0
        if args.command == "run":
            files = run_config(args.config, args.out, **_overrides(args))
            for path in files:
                print(path)
            return 0
        reports = run_suite(args.suite)
        print(format_reports(reports))
        failed = [r for r in reports if r.passed is False]
        return 1 if failed else 0
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
