"""Command-line interface.

Every subcommand prints one JSON document on stdout and a short human
summary on stderr.  Exit status: 0 success, 2 bad configuration or input,
3 a built-in check failed, 4 adaptive precision ran out.
"""

import argparse
import json
import math
import sys
import time

from . import __version__
from .aggregate import count_S2, main_term_S2, split_upper_lower
from .angles import ArcProduct, PrecisionError, default_precision, parse_arcs
from .field import ConfigError, builtin_names, load_descriptor
from .heights import Height
from .oracle import (OracleError, discrepancy, enumerate_SK, histogram,
                     histogram_csv, points_in)
from .sieve import (constant_AK, constant_AK_geometric, count_SK, main_term,
                    ramified_factor, zeta_k2)

SCHEMA = "normone.report/1"

EXIT_OK, EXIT_CONFIG, EXIT_ASSERT, EXIT_PRECISION = 0, 2, 3, 4


class CheckFailed(Exception):
    """An embedded check failed; the report is still emitted."""


def _heights(text):
    try:
        return [Height.parse(h) for h in text.split(",") if h.strip()]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _arcs(text, N):
    try:
        return parse_arcs(text, N)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _scaled(x, h):
    h = float(h)
    return x / (h * math.log(h)) if h > 1 else None


def _arc_text(arcs):
    return " u ".join(str(a) for a in arcs)


def cmd_constants(args):
    fd = load_descriptor(args.field)
    report = {
        "field": fd.describe(),
        "zeta_k2": float(zeta_k2(fd)),
        "ramified_factor": ramified_factor(fd),
        "A_K": constant_AK(fd),
        "A_K_volume_corrected": constant_AK_geometric(fd),
    }
    summary = f"{fd.name}: A_K = {report['A_K']:.6f}"
    if fd.degree_N > 1:
        summary += f" (volume corrected {report['A_K_volume_corrected']:.6f})"
    return report, summary


def _count_row(fd, arcs, h, args, points=None):
    sieve, ledger = count_SK(fd, arcs, h, threads=args.threads)
    mt = main_term(fd, arcs, h)
    row = {
        "H": str(h),
        "sieve": sieve,
        "main_term": mt,
        "residual": sieve - mt,
        "residual_scaled": _scaled(sieve - mt, h),
        "ledger": ledger.summary(),
    }
    if fd.degree_N > 1:
        row["main_term_volume_corrected"] = main_term(fd, arcs, h, geometric=True)
    if args.oracle:
        if points is None:
            points = enumerate_SK(fd, arcs, h)
        row["oracle"] = len(points)
        row["status"] = "PASS" if row["oracle"] == sieve else "FAILED"
    return row


def cmd_count(args):
    fd = load_descriptor(args.field)
    arcs = _arcs(args.arc, fd.degree_N)
    rows = []
    for h in _heights(args.H):
        t0 = time.perf_counter()
        row = _count_row(fd, arcs, h, args)
        if args.timing:
            row["wall_time"] = time.perf_counter() - t0
        rows.append(row)
    report = {"field": fd.name, "arcs": _arc_text(arcs), "rows": rows}
    lines = [f"{fd.name} I={_arc_text(arcs)}"]
    for r in rows:
        extra = f" oracle={r['oracle']} {r['status']}" if "oracle" in r else ""
        lines.append(f"  H={r['H']}: sieve={r['sieve']} main={r['main_term']:.2f}{extra}")
    if any(r.get("status") == "FAILED" for r in rows):
        raise CheckFailed(report, "\n".join(lines))
    return report, "\n".join(lines)


def cmd_verify(args):
    """Residuals against the main term over a height grid, full circle."""
    fd = load_descriptor(args.field)
    arcs = [ArcProduct.full(fd.degree_N)]
    rows = []
    for h in _heights(args.H):
        t0 = time.perf_counter()
        row = _count_row(fd, arcs, h, args)
        row["ratio"] = row["sieve"] / row["main_term"]
        if args.timing:
            row["wall_time"] = time.perf_counter() - t0
        rows.append(row)
    scaled = [r["residual_scaled"] for r in rows if r["residual_scaled"] is not None]
    report = {"field": fd.name, "rows": rows,
              "max_abs_residual_scaled": max(map(abs, scaled)) if scaled else None}
    lines = [f"{fd.name}: H, count, residual/(H log H), count/main"]
    for r in rows:
        s = "-" if r["residual_scaled"] is None else f"{r['residual_scaled']:+.4f}"
        lines.append(f"  {r['H']:>8} {r['sieve']:>10} {s:>10} {r['ratio']:.4f}")
    if any(r.get("status") == "FAILED" for r in rows):
        raise CheckFailed(report, "\n".join(lines))
    return report, "\n".join(lines)


def cmd_discrepancy(args):
    fd = load_descriptor(args.field)
    rows = []
    for h in _heights(args.H):
        t0 = time.perf_counter()
        points = enumerate_SK(fd, [ArcProduct.full(fd.degree_N)], h)
        value, mode = discrepancy(fd, h, points, grid=args.grid)
        if not 0 <= value <= 1:
            raise CheckFailed({"field": fd.name, "H": str(h), "value": value},
                              f"discrepancy {value} outside [0, 1]")
        row = {"H": str(h), "points": len(points), "discrepancy": value, "mode": mode,
               "scaled": value * float(h) / math.log(float(h)) if float(h) > 1 else None}
        if args.timing:
            row["wall_time"] = time.perf_counter() - t0
        rows.append(row)
    lines = [f"{fd.name}: " + ", ".join(f"D({r['H']})={r['discrepancy']:.6f}" for r in rows)]
    return {"field": fd.name, "rows": rows}, "\n".join(lines)


def cmd_s2(args):
    arcs = _arcs(args.arc, 1)
    rows = []
    for h in _heights(args.H):
        t0 = time.perf_counter()
        total, main = 0, 0.0
        for ap in arcs:
            iv = ap.intervals[0]
            total += count_S2(iv, h)
            main += sum(main_term_S2(p, h) for p in split_upper_lower(iv))
        row = {"H": str(h), "count": total, "main_term": main,
               "ratio": total / main if main else None}
        if args.timing:
            row["wall_time"] = time.perf_counter() - t0
        rows.append(row)
    lines = [f"S2 I={_arc_text(arcs)}"] + [
        f"  H={r['H']}: count={r['count']} main={r['main_term']:.1f}" for r in rows]
    return {"arcs": _arc_text(arcs), "rows": rows}, "\n".join(lines)


def cmd_histogram(args):
    fd = load_descriptor(args.field)
    hs = _heights(args.H)
    if len(hs) != 1:
        raise ConfigError("histogram takes exactly one height")
    h = hs[0]
    if args.bins < 1:
        raise ConfigError("--bins must be positive")
    points = enumerate_SK(fd, [ArcProduct.full(fd.degree_N)], h)
    rows = histogram(fd, h, args.bins, points)
    if sum(c for _, _, c in rows) != len(points):
        raise CheckFailed({}, "histogram does not add up to the point count")
    summary = f"{fd.name} H={h}: {len(points)} points in {args.bins} bins"
    if args.format == "csv":
        return histogram_csv(rows), summary
    return {"field": fd.name, "H": str(h), "points": len(points),
            "bins": [{"bin_lo": lo, "bin_hi": hi, "count": c} for lo, hi, c in rows]}, summary


COMMANDS = {
    "constants": cmd_constants,
    "count": cmd_count,
    "verify": cmd_verify,
    "discrepancy": cmd_discrepancy,
    "s2": cmd_s2,
    "histogram": cmd_histogram,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="normone",
        description="Count norm-one elements of bounded height in CM fields.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, field=True, heights=None, arc=False):
        if field:
            p.add_argument("field_pos", nargs="?", metavar="FIELD",
                           help="builtin name (%s) or JSON config path" % ", ".join(builtin_names()))
            p.add_argument("--field", dest="field_opt", metavar="NAME|PATH")
        if heights is not None:
            p.add_argument("--H", default=heights, help="comma-separated heights, e.g. 5,sqrt5,1.5")
        if arc:
            p.add_argument("--arc", default="0:2pi", help="lo:hi[,lo:hi...] in radians; pi allowed")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--timing", action="store_true", help="include wall-clock times")

    common(sub.add_parser("constants", help="field invariants and the leading constant"))
    p = sub.add_parser("count", help="exact count by sieve, optionally checked by brute force")
    common(p, heights="5", arc=True)
    p.add_argument("--oracle", action="store_true")
    p = sub.add_parser("verify", help="residuals against the main term over a height grid")
    common(p, heights="10,20,50,100")
    p.add_argument("--oracle", action="store_true")
    p = sub.add_parser("discrepancy", help="discrepancy of the arguments")
    common(p, heights="10")
    p.add_argument("--grid", type=int, default=32, help="grid size for N = 2")
    p = sub.add_parser("s2", help="aggregate count over all imaginary quadratic fields")
    common(p, field=False, heights="30", arc=True)
    p.set_defaults(arc="0:pi")
    p = sub.add_parser("histogram", help="histogram of the first argument")
    common(p, heights="10")
    p.add_argument("--bins", type=int, default=16)
    return parser


def _emit(report, fmt):
    if isinstance(report, str):
        sys.stdout.write(report)
        return
    if fmt == "csv":
        raise ConfigError("--format csv is only available for histogram")
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "field_pos"):
        args.field = args.field_opt or args.field_pos
        if args.field is None:
            parser.error("a field is required (positional or --field)")
    status = EXIT_OK
    try:
        default_precision()
        if args.threads < 1:
            raise ConfigError("--threads must be positive")
        if args.format == "csv" and args.command != "histogram":
            raise ConfigError("--format csv is only available for histogram")
        report, summary = COMMANDS[args.command](args)
    except CheckFailed as exc:
        report, summary = exc.args
        summary = "FAILED: " + summary
        status = EXIT_ASSERT
    except (OracleError, AssertionError) as exc:
        report, summary, status = {"error": str(exc)}, f"check failed: {exc}", EXIT_ASSERT
    except PrecisionError as exc:
        report, summary, status = {"error": str(exc)}, f"precision: {exc}", EXIT_PRECISION
    except (ConfigError, ValueError) as exc:
        print(f"normone: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if isinstance(report, dict):
        report = {"schema": SCHEMA, "command": args.command,
                  "status": "ok" if status == EXIT_OK else "failed", **report}
    _emit(report, args.format)
    print(summary, file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
