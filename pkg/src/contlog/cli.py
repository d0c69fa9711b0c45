"""Command-line front end.

Exit status: 0 on success, 1 on bad input, 2 when a verification found
violations.
"""

from __future__ import annotations

import argparse
import os
import sys
from math import gcd
from typing import Optional, Sequence

from . import analysis, audit, bounds, clog, kernel
from .ratcore import PreconditionError, parse_nat

EXIT_OK, EXIT_USAGE, EXIT_VIOLATIONS = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_rational(text: str, lowest: bool = False) -> tuple[int, int]:
    """``p/q`` or bare ``p`` (q = 1)."""
    if "/" in text:
        num, _, den = text.partition("/")
        p, q = parse_nat(num), parse_nat(den)
    else:
        p, q = parse_nat(text), 1
    if q == 0:
        raise PreconditionError(f"zero denominator in {text!r}")
    if p < q:
        raise PreconditionError(f"{text} is below 1; inputs must satisfy p >= q")
    if lowest:
        g = gcd(p, q)
        p, q = p // g, q // g
    return p, q


def _default_jobs() -> int:
    raw = os.environ.get("CLOG_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"CLOG_JOBS must be an integer, got {raw!r}")


def _positive(text: str) -> int:
    try:
        return parse_nat(text)
    except PreconditionError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="clog", description="Continued logarithms of rationals p/q >= 1.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    jobs = _Parser(add_help=False)
    jobs.add_argument("--jobs", type=_positive, default=None,
                      help="worker processes (default: $CLOG_JOBS or 1)")
    as_json = _Parser(add_help=False)
    as_json.add_argument("--json", action="store_true", help="structured output")

    s = sub.add_parser("expand", help="continued logarithm expansion of R")
    s.add_argument("rational")
    s.add_argument("--no-reduce", action="store_true", help="keep raw pairs between steps")
    s.add_argument("--lowest", action="store_true", help="reduce the input by its gcd first")

    s = sub.add_parser("eval", help="evaluate an expansion like <3,0,1,2>")
    s.add_argument("expansion")

    s = sub.add_parser("trace", help="per-step records: step k p q p' q'")
    s.add_argument("rational")
    s.add_argument("--reduce", action="store_true", help="divide out common powers of two")
    s.add_argument("--lowest", action="store_true")

    s = sub.add_parser("audit", parents=[as_json], help="potential-function audit of R")
    s.add_argument("rational")
    s.add_argument("--lowest", action="store_true")

    for name, text in [("verify-l", "check L <= 2 log2 p + 2 exhaustively"),
                       ("verify-t", "check T < log2 p (2 log2 p + 2) exhaustively")]:
        s = sub.add_parser(name, parents=[jobs, as_json], help=text)
        s.add_argument("--max", type=_positive, required=True, dest="max")

    for name, text in [("mersenne", "check the 2^n - 1 closed form for 2 <= n <= max"),
                       ("tightness", "check L(2^n - 1) >= 2 log2 p - 2")]:
        s = sub.add_parser(name, parents=[as_json], help=text)
        s.add_argument("--max", type=_positive, required=True, dest="max")

    s = sub.add_parser("sweep", parents=[jobs], help="CSV of L and T statistics over q < p < 2q")
    s.add_argument("--q-min", type=_positive, required=True)
    s.add_argument("--q-max", type=_positive, required=True)
    s.add_argument("--all-p", action="store_true", help="include p with gcd(p, q) > 1")

    s = sub.add_parser("seq-l", help="L(1..N) as 'n L(n)' lines")
    s.add_argument("--max", type=_positive, required=True, dest="max")

    s = sub.add_parser("kernel", help="k-kernel rank profile of L(n)")
    s.add_argument("--k", type=_positive, required=True)
    s.add_argument("--depth", type=_positive, required=True)
    s.add_argument("--len", type=_positive, required=True, dest="length")

    s = sub.add_parser("cf", help="ordinary continued fraction of R")
    s.add_argument("rational")

    s = sub.add_parser("compare", parents=[jobs], help="CSV comparing CF length, L and T")
    s.add_argument("--max", type=_positive, required=True, dest="max")
    return parser


def _bound_output(report: bounds.BoundReport, args, out) -> int:
    if args.json:
        print(report.json(), file=out)
    else:
        print(report.summary(), file=out)
        for note in report.notes:
            print(f"note: {note}", file=out)
        for v in report.violations:
            print("violation: " + " ".join(map(str, v)), file=out)
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def dispatch(args, out) -> int:
    jobs = getattr(args, "jobs", None) or _default_jobs()
    cmd = args.command
    if cmd == "expand":
        p, q = parse_rational(args.rational, args.lowest)
        print(clog.expand(p, q, reduce=not args.no_reduce), file=out)
    elif cmd == "eval":
        print(clog.evaluate(clog.Expansion.parse(args.expansion)), file=out)
    elif cmd == "trace":
        p, q = parse_rational(args.rational, args.lowest)
        for line in clog.trace(p, q, reduce=args.reduce).lines():
            print(line, file=out)
    elif cmd == "audit":
        p, q = parse_rational(args.rational, args.lowest)
        report = audit.audit_trace(clog.trace(p, q, reduce=False))
        print(report.jsonl() if args.json else report.text(), file=out)
        return EXIT_OK if report.ok else EXIT_VIOLATIONS
    elif cmd == "verify-l":
        return _bound_output(bounds.verify_L_bound(args.max, jobs=jobs), args, out)
    elif cmd == "verify-t":
        return _bound_output(bounds.verify_T_bound(args.max, jobs=jobs), args, out)
    elif cmd == "mersenne":
        return _bound_output(bounds.verify_mersenne(args.max), args, out)
    elif cmd == "tightness":
        return _bound_output(bounds.tightness_check(args.max), args, out)
    elif cmd == "sweep":
        rows = analysis.sweep_stats(args.q_min, args.q_max, coprime_only=not args.all_p, jobs=jobs)
        out.write(analysis.sweep_csv(rows))
    elif cmd == "seq-l":
        for n, v in enumerate(analysis.sequence_L(args.max), start=1):
            print(n, v, file=out)
    elif cmd == "kernel":
        print(kernel.kernel_rank_profile(args.k, args.depth, args.length).text(), file=out)
    elif cmd == "cf":
        p, q = parse_rational(args.rational)
        print(analysis.cf_expand(p, q), file=out)
    elif cmd == "compare":
        out.write(analysis.compare_csv(analysis.compare_cf(args.max, jobs=jobs)))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    try:
        args = build_parser().parse_args(argv)
        return dispatch(args, out)
    except (UsageError, PreconditionError) as exc:
        print(f"clog: error: {exc}", file=err)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
