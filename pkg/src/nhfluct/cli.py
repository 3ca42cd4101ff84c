"""Command-line front end.

    nhfluct run --config PATH --out DIR [--format json|csv|both] [--workers K] [--seed S]
    nhfluct verify-theory
    nhfluct oracle --n-max N

Exit codes: 0 success, 2 a configured check failed, 64 bad config or
usage, 74 I/O failure. ``NHFLUCT_WORKERS`` sets the default worker count.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import load_config
from .errors import ConfigError, EmptyAggregateError
from .harness import run_experiment
from .oracles import ENUMERATION_MAX_N
from .report import write_report
from .suites import format_table, oracle_suite, theory_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_CONFIG = 64
EXIT_IO = 74


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nhfluct", description="Fluctuations of matrix entries of functions of non-Hermitian random matrices.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a Monte Carlo experiment from a config file")
    r.add_argument("--config", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--format", choices=("json", "csv", "both"), default="both")
    r.add_argument("--workers", type=int, default=None, help="worker processes (default $NHFLUCT_WORKERS or 1)")
    r.add_argument("--seed", type=int, default=None, help="override the config seed")
    sub.add_parser("verify-theory", help="deterministic identities of the limiting covariances")
    o = sub.add_parser("oracle", help="exact enumeration oracles")
    o.add_argument("--n-max", type=int, default=4)
    return p


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config, seed=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        report = run_experiment(cfg, workers=args.workers)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EmptyAggregateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    try:
        paths = write_report(report, args.out, args.format)
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    for c in report.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_verify_theory(args) -> int:
    checks = theory_suite()
    print(format_table(checks))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK_FAILED


def cmd_oracle(args) -> int:
    if not 1 <= args.n_max <= ENUMERATION_MAX_N:
        print(f"refusing --n-max {args.n_max}: enumeration is limited to 1 <= n <= {ENUMERATION_MAX_N}", file=sys.stderr)
        return EXIT_CONFIG
    checks = oracle_suite(args.n_max)
    print(format_table(checks))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "workers", None) is not None and args.workers < 1:
        print("--workers must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    handlers = {"run": cmd_run, "verify-theory": cmd_verify_theory, "oracle": cmd_oracle}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
