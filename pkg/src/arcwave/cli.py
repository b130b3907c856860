"""Command line front end.

Usage: ``arcwave <subcommand> --config path/to/config.json``

Subcommands: solve, convergence-table, iterations-table, spectrum,
strip-limit. Exit codes: 0 on success, 2 when an iterative solve or an
eigensolve fails to converge (reports are still written), 3 on an
invalid configuration (the message names the offending field).
"""

import argparse
import json
import sys

from . import experiments as ex

COMMANDS = {
    "solve": ex.run_solve,
    "convergence-table": ex.run_convergence_table,
    "iterations-table": ex.run_iterations_table,
    "spectrum": ex.run_spectrum,
    "strip-limit": ex.run_strip_limit,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="arcwave",
        description="Elastic scattering by arcs and closed curves.",
    )
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", required=True, help="path to a JSON config")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = ex.load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 3
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return 3

    try:
        result = COMMANDS[args.command](cfg)
    except ex.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ArithmeticError as exc:
        print(f"error: eigensolve did not converge: {exc}", file=sys.stderr)
        return 2

    if args.command == "solve" and not result["converged"]:
        print(
            "warning: GMRES did not reach the tolerance "
            f"(final residual {result['final_residual']:.3e})",
            file=sys.stderr,
        )
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
