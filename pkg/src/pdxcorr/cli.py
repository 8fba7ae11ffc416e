"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analysis, decimation, quadform
from .errors import CensusMismatch, PdxError, PredictionMismatch
from .gf2m import build_field, element_order
from .sequences import ROUTES, spectrum

OUTPUT_DIR_ENV = "PDXCORR_OUTPUT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _hex(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hexadecimal mask: {text!r}")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write here instead of stdout; relative "
                        f"paths resolve against ${OUTPUT_DIR_ENV} when set")
    common.add_argument("--threads", type=_positive, default=None,
                        help="cap on worker threads (default: all cores)")

    p = argparse.ArgumentParser(
        prog="pdxcorr",
        description="Cross correlation of period-different m-sequences.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("field-info", parents=[common], help="describe GF(2^m)")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--poly", type=_hex)
    s.add_argument("--format", choices=("json", "table"), default="table")

    s = sub.add_parser("enumerate", parents=[common], help="list decimations for n")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    s.add_argument("--format", choices=("csv", "json"), default="csv")

    s = sub.add_parser("spectrum", parents=[common], help="correlation spectrum of d")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--poly", type=_hex)
    s.add_argument("--route", choices=ROUTES, default="auto")
    s.add_argument("--format", choices=("json", "table"), default="json")

    s = sub.add_parser("rank-census", parents=[common], help="ranks of rho_a over all a")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--poly", type=_hex)
    s.add_argument("--format", choices=("json", "table"), default="json")

    s = sub.add_parser("verify", parents=[common], help="check the predicted distribution")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--poly", type=_hex)
    s.add_argument("--format", choices=("json", "table"), default="json")

    s = sub.add_parser("search", parents=[common], help="search all coset leaders d")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--max-values", type=int, default=4)
    s.add_argument("--poly", type=_hex)
    s.add_argument("--allow-large", action="store_true",
                   help=f"permit m up to {analysis.SEARCH_HARD_MAX_M}")
    s.add_argument("--format", choices=("csv", "json", "table"), default="csv")
    return p


# -- commands ------------------------------------------------------------------------------


def cmd_field_info(args) -> tuple[str, int]:
    f = build_field(args.m, args.poly)
    info = {
        "m": f.m,
        "n": f.n,
        "poly": f"{f.prim_poly:#x}",
        "T": f.T,
        "alpha_order": element_order(f.alpha),
        "beta": f"{f.beta.value:#x}",
        "beta_order": element_order(f.beta),
    }
    if args.format == "json":
        return json.dumps(info) + "\n", EXIT_OK
    return "".join(f"{k:<12}{v}\n" for k, v in info.items()), EXIT_OK


def cmd_enumerate(args) -> tuple[str, int]:
    if args.n is not None:
        n = args.n
    else:
        if args.m % 2:
            raise UsageError("--m must be even")
        n = args.m // 2
    rows = decimation.enumerate_decimations(n)
    if args.format == "json":
        out = [
            {"n": p.n, "d": p.d, "coset_leader": p.coset_leader, "l": p.l, "i": p.i,
             "k": p.k, "r": p.r, "s": p.s}
            for p in rows
        ]
        return json.dumps(out) + "\n", EXIT_OK
    return decimation.decimations_csv(rows), EXIT_OK


def cmd_spectrum(args) -> tuple[str, int]:
    f = build_field(args.m, args.poly)
    spec = spectrum(f, args.d, args.route)
    if args.format == "json":
        return spec.to_json() + "\n", EXIT_OK
    lines = [f"{'value':>12} {'count':>8}"]
    lines += [f"{v:>12} {c:>8}" for v, c in spec.entries.items()]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_rank_census(args) -> tuple[str, int]:
    f = build_field(args.m, args.poly)
    n = f.n
    l = decimation.normalize_l(args.l, n)
    N = (1 << n) - 1
    # any d solving the congruence for this l; the census itself depends on l only
    d = pow((1 << l) + 1, -1, N)
    params = decimation.derive_params(d, l, 0, n)
    try:
        census = quadform.rank_census(f, params)
        code = EXIT_OK
    except CensusMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        census = quadform.rank_census(f, params, check=False)
        code = EXIT_FAIL
    if args.format == "json":
        return census.to_json() + "\n", code
    lines = [f"{'rank':>6} {'count':>8}"]
    lines += [f"{r:>6} {c:>8}" for r, c in sorted(census.counts.items(), reverse=True)]
    return "\n".join(lines) + "\n", code


def cmd_verify(args) -> tuple[str, int]:
    f = build_field(args.m, args.poly)
    params = analysis.params_or_none(f, args.d)
    if params is None:
        raise UsageError(f"d={args.d} solves no congruence d(2^l+1) = 2^i mod 2^{f.n}-1")
    report = analysis.verify_theorem1(f, params, strict=False)
    code = EXIT_OK if report.passed else EXIT_FAIL
    if args.format == "json":
        return report.to_json() + "\n", code
    lines = [f"m={report.m} d={report.d} l={params.l} i={params.i} k={params.k}: "
             + ("PASS" if report.passed else "FAIL")]
    lines.append(f"{'value':>12} {'empirical':>10} {'predicted':>10}")
    values = sorted(set(report.empirical.entries) | {v for v, _ in report.predicted.rows})
    for v in values:
        pred = dict(report.predicted.rows).get(v, 0)
        lines.append(f"{v:>12} {report.empirical.entries.get(v, 0):>10} {pred:>10}")
    lines += [f"problem: {p}" for p in report.problems]
    return "\n".join(lines) + "\n", code


def cmd_search(args) -> tuple[str, int]:
    records = analysis.search_decimations(
        args.m, args.max_values, threads=args.threads,
        allow_large=args.allow_large, prim_poly=args.poly,
    )
    if args.format == "csv":
        return analysis.search_csv(records), EXIT_OK
    if args.format == "json":
        out = [dict(zip(analysis.SEARCH_CSV_HEADER, r.csv_row())) for r in records]
        return json.dumps(out) + "\n", EXIT_OK
    lines = [f"{'d':>8} {'#':>2} {'match':>8}  values"]
    for r in records:
        match = f"{r.matched[0]},{r.matched[1]}" if r.matched else "-"
        lines.append(f"{r.d:>8} {r.num_distinct_values:>2} {match:>8}  {r.spectrum.compact()}")
    return "\n".join(lines) + "\n", EXIT_OK


COMMANDS = {
    "field-info": cmd_field_info,
    "enumerate": cmd_enumerate,
    "spectrum": cmd_spectrum,
    "rank-census": cmd_rank_census,
    "verify": cmd_verify,
    "search": cmd_search,
}


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    path = Path(output)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, code = COMMANDS[args.command](args)
    except (PredictionMismatch, CensusMismatch) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (PdxError, UsageError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write(text, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
