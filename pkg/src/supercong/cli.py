"""Command-line front end.

    supercong list
    supercong check 4f3_unit --prime 7 alpha=1/2
    supercong sweep --checks theorems --primes 5..97 --jobs 4 --out report.jsonl
    supercong gamma 1/8 --prime 11 --precision 2

Exit status: 0 when every case passes (precondition-unmet included),
1 when any case fails, 2 on a configuration or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .arith import PadicContext
from .errors import ConfigError, SupercongError
from .gamma import gamma_p
from .registry import CHECKS, GROUPS, list_checks, run_case
from .results import Verdict
from .sweep import config_from_mapping, load_config, run_sweep, write_report

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

INT_PARAMS = {"i", "j", "k", "n", "s", "m1", "m2", "l", "eps", "a"}


def parse_param(key: str, value: str):
    """key=value from the command line; comma lists become tuples."""
    if "," in value:
        items = tuple(parse_param(key, v) for v in value.split(",") if v)
        return items if key != "m" or len(items) != 1 else items[0]
    if key == "variant":
        return value
    if key in INT_PARAMS or key == "m":
        return int(value)
    return Fraction(value)


def cmd_list(args) -> int:
    for entry in list_checks():
        if args.group and entry.group != args.group:
            continue
        print(entry.catalog_line())
    return EXIT_OK


def cmd_check(args) -> int:
    if args.check not in CHECKS:
        print(f"error: unknown check {args.check!r}", file=sys.stderr)
        return EXIT_CONFIG
    entry = CHECKS[args.check]
    params = {}
    for item in args.params:
        key, sep, value = item.partition("=")
        if not sep:
            print(f"error: expected key=value, got {item!r}", file=sys.stderr)
            return EXIT_CONFIG
        try:
            params[key] = parse_param(key, value)
        except (ValueError, ZeroDivisionError):
            print(f"error: bad value for {key}: {value!r}", file=sys.stderr)
            return EXIT_CONFIG
    unknown = set(params) - set(entry.schema)
    missing = set(entry.schema) - set(params)
    if entry.id == "cubic:one_third":
        missing.discard("x")
    if unknown or missing:
        print(f"error: {entry.id} takes params [{','.join(entry.schema)}]", file=sys.stderr)
        return EXIT_CONFIG
    if entry.prime_indexed and args.prime is None:
        print(f"error: {entry.id} needs --prime", file=sys.stderr)
        return EXIT_CONFIG
    k = args.precision
    if k is not None and entry.exponent is not None and (k < entry.exponent or not entry.adjustable
                                                          and k != entry.exponent):
        print(f"error: {entry.id} does not accept precision {k}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run_case(entry.id, args.prime if entry.prime_indexed else None, params, k)
    except (ValueError, SupercongError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(json.dumps(result.to_record()))
    return EXIT_FAIL if result.verdict is Verdict.FAIL else EXIT_OK


def build_config(args):
    data = load_config(args.config) if args.config else {}
    overrides = {
        "checks": args.checks,
        "primes": args.primes,
        "alpha": args.alpha,
        "x": args.x,
        "m": args.m,
        "int_m": args.int_m,
        "n": args.n,
        "l": args.l,
        "eps": args.eps,
        "seed": args.seed,
        "km_cases": args.km_cases,
        "jobs": args.jobs,
        "format": args.format,
        "out": args.out,
        "summary": args.summary,
        "plot_dir": args.plot_dir,
        "corrupt_rhs": args.corrupt_rhs,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    if args.fail_fast:
        data["fail_fast"] = True
    if args.precision:
        prec = dict(data.get("precision") or {}) if isinstance(data.get("precision"), dict) else {}
        for item in args.precision:
            key, sep, value = item.rpartition("=")
            try:
                prec[key if sep else "*"] = int(value)
            except ValueError:
                raise ConfigError(f"expected K or CHECK=K, got {item!r}", "precision") from None
        data["precision"] = prec
    return config_from_mapping(data, args.config or "command line")


def print_summary(report, stream):
    for check, tally in report.counts.items():
        line = "  ".join(f"{v}={n}" for v, n in tally.items())
        print(f"{check:<18} {line}", file=stream)
    totals = report.totals
    print(f"total: {sum(totals.values())} cases, {totals['fail']} failing", file=stream)
    if report.stopped_early:
        print("stopped early (--fail-fast)", file=stream)


def cmd_sweep(args) -> int:
    try:
        cfg = build_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = run_sweep(cfg)
    if cfg.plot_dir:
        from .plotting import write_figures

        report.figures = write_figures(report, cfg.plot_dir)
    write_report(report, cfg, sys.stdout)
    print_summary(report, sys.stderr)
    return report.exit_code


def cmd_gamma(args) -> int:
    try:
        ctx = PadicContext(args.prime, args.precision)
        value = gamma_p(Fraction(args.x), ctx)
    except (ValueError, ZeroDivisionError, SupercongError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(value.value)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="supercong", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="print the check catalog")
    p_list.add_argument("--group", choices=GROUPS)
    p_list.set_defaults(func=cmd_list)

    p_check = sub.add_parser("check", help="run a single case")
    p_check.add_argument("check", help="check id, see `supercong list`")
    p_check.add_argument("params", nargs="*", metavar="KEY=VALUE")
    p_check.add_argument("--prime", "-p", type=int)
    p_check.add_argument("--precision", "-k", type=int)
    p_check.set_defaults(func=cmd_check)

    p_sweep = sub.add_parser("sweep", help="run a campaign over primes and parameter grids")
    p_sweep.add_argument("--config", help="JSON file with the same fields; flags override it")
    p_sweep.add_argument("--checks", help="comma list of ids or groups: all, " + ", ".join(GROUPS))
    p_sweep.add_argument("--primes", help="inclusive range A..B")
    p_sweep.add_argument("--precision", action="append", metavar="K|CHECK=K",
                         help="precision override; bare K applies to every adjustable check")
    p_sweep.add_argument("--alpha", help="alpha grid a/b,c/d,... (default depends on p)")
    p_sweep.add_argument("--x", help="x grid for the convolution checks")
    p_sweep.add_argument("--m", help="exponents m for the reduction check, e.g. 1..4")
    p_sweep.add_argument("--int-m", dest="int_m", help="exponents m for the integer-valued check")
    p_sweep.add_argument("--n", help="n range for the integer-valued check")
    p_sweep.add_argument("--l", help="l range for the integer-valued check")
    p_sweep.add_argument("--eps", help="signs, e.g. 1,-1")
    p_sweep.add_argument("--seed", type=int)
    p_sweep.add_argument("--km-cases", dest="km_cases", type=int)
    p_sweep.add_argument("--jobs", "-j", type=int, help="worker processes (default $SUPERCONG_JOBS or CPU count)")
    p_sweep.add_argument("--format", choices=("json", "csv"))
    p_sweep.add_argument("--out", "-o", help="records file (default stdout)")
    p_sweep.add_argument("--summary", help="write the summary JSON here")
    p_sweep.add_argument("--plot-dir", dest="plot_dir", help="write PNG figures into this directory")
    p_sweep.add_argument("--fail-fast", action="store_true")
    p_sweep.add_argument("--corrupt-rhs", dest="corrupt_rhs", help=argparse.SUPPRESS)
    p_sweep.set_defaults(func=cmd_sweep)

    p_gamma = sub.add_parser("gamma", help="evaluate Gamma_p(x) mod p^k")
    p_gamma.add_argument("x")
    p_gamma.add_argument("--prime", "-p", type=int, required=True)
    p_gamma.add_argument("--precision", "-k", type=int, default=1)
    p_gamma.set_defaults(func=cmd_gamma)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        # key=value pairs may follow options, which argparse will not take positionally.
        args, extra = parser.parse_known_args(argv)
        if extra:
            if args.command != "check" or any("=" not in e or e.startswith("-") for e in extra):
                parser.error(f"unrecognized arguments: {' '.join(extra)}")
            args.params += extra
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
