"""Command-line front end.

Commands: ``mosaic``, ``tiling``, ``alpha``, ``stats``, ``sample`` and
``verify``.  Output JSON is canonical (sorted keys, sorted cells), so
re-running a command gives byte-identical files.

Exit codes: 0 success, 2 degenerate or infeasible input, 3 verification
mismatch, 4 usage error (including bad input files and size guards).
"""
from fractions import Fraction
from pathlib import Path
import argparse
import csv
import io
import json
import logging
import math
import sys

from .exceptions import GeometryError, SizeGuardError
from .experiments import (KINDS, SampleSpec, run_trials, sample, write_cluster_csv,
                          write_degree_csv, write_summary_csv, write_wide_csv)
from .oracle import MAX_ORACLE_POINTS, brute_orderk, mosaics_equal
from .orderk import compute_up_to_order, rhomboid_stream
from .radius import compute_radius_function, filtration
from .tiling import build_tiling, vertex_embedding
from .validation import PointParseError, check_order, check_threshold, parse_points

__all__ = ["main", "build_parser", "mosaic_to_dict", "format_value", "format_decimal",
           "EXIT_OK", "EXIT_DEGENERATE", "EXIT_MISMATCH", "EXIT_USAGE"]

EXIT_OK, EXIT_DEGENERATE, EXIT_MISMATCH, EXIT_USAGE = 0, 2, 3, 4

logger = logging.getLogger("kdelaunay")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument parser that exits with the usage code instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- formatting

def format_value(x):
    """Exact text of a squared radius: ``p/q``, an integer, ``inf`` or ``-inf``."""
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return str(Fraction(x))


def format_decimal(q):
    """Exact decimal text of a rational whose denominator divides a power of ten.

    Other rationals are written as ``p/q``.
    """
    q = Fraction(q)
    den, places = q.denominator, 0
    while den % 10 == 0:
        den //= 10
        places += 1
    while den % 2 == 0 or den % 5 == 0:
        if den % 2 == 0:
            den //= 2
        else:
            den //= 5
        places += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    if places == 0:
        return str(q.numerator)
    scaled = abs(q.numerator) * 10 ** places // q.denominator
    digits = str(scaled).rjust(places + 1, "0")
    sign = "-" if q < 0 else ""
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _emit(text, out):
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)


def mosaic_to_dict(m):
    """Canonical JSON record of a mosaic.

    Cells are ordered by generation, anchor and vertex list; ``vertex_refs``
    index into ``vertices``.
    """
    cells = sorted(m.cells, key=lambda c: (c.generation, c.anchor, c.vertices))
    return {
        "order": m.order,
        "vertices": [list(v) for v in m.vertices],
        "cells": [{"anchor": list(c.anchor), "a_on": list(c.rhomboid.a_on),
                   "generation": c.generation, "vertex_refs": m.vertex_refs(c)}
                  for c in cells],
    }


# ------------------------------------------------------------------- inputs

def _add_source(p):
    g = p.add_argument_group("input (exactly one source)")
    g.add_argument("--input", "-i", help="point file; '-' reads stdin")
    g.add_argument("--sample", choices=KINDS,
                   help="generate points instead of reading a file")
    g.add_argument("--n", type=int, help="number of sampled points")
    g.add_argument("--d", type=int, help="dimension of sampled points")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--digits", type=int, default=6, help="decimals kept by the sampler")


def _load_points(args):
    if args.input is not None and args.sample is not None:
        raise UsageError("give either --input or --sample, not both")
    if args.input is not None:
        if args.input == "-":
            return parse_points(sys.stdin.read())
        try:
            text = Path(args.input).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
        return parse_points(text)
    if args.sample is None:
        raise UsageError("no input: give --input FILE or --sample KIND --n N --d D")
    if args.n is None or args.d is None:
        raise UsageError("--sample needs --n and --d")
    return sample(SampleSpec(args.sample, args.n, args.d, args.seed, args.digits))


# ----------------------------------------------------------------- commands

def cmd_mosaic(args):
    A = _load_points(args)
    K = check_order(args.k, len(A), "--k")
    mosaics = compute_up_to_order(A, K, perturb=args.perturb, seed=args.perturb_seed)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for m in mosaics:
            (out / f"mosaic_k{m.order}.json").write_text(_dump(mosaic_to_dict(m)))
        logger.info("wrote %d mosaics to %s", len(mosaics), out)
    else:
        _emit(_dump([mosaic_to_dict(m) for m in mosaics]), args.out)
    return EXIT_OK


def cmd_tiling(args):
    A = _load_points(args)
    n = len(A)
    depth = n if args.depth is None else check_order(args.depth, n, "--depth")
    mosaics = compute_up_to_order(A, depth)
    T = build_tiling(rhomboid_stream(mosaics), None if depth == n else depth, n=n)
    rows = []
    for rho in T:
        row = {"a_in": list(rho.a_in), "a_on": list(rho.a_on), "dimension": rho.dimension,
               "depth": rho.depth}
        if args.embed and rho.dimension == 0:
            row["position"] = [str(x) for x in vertex_embedding(rho.a_in, A)]
        rows.append(row)
    doc = {"n": n, "d": A.dim, "depth_limit": T.depth_limit, "rhomboids": rows}
    _emit(_dump(doc), args.out)
    return EXIT_OK


def cmd_alpha(args):
    A = _load_points(args)
    n = len(A)
    k = check_order(args.k, n, "--k")
    threshold = check_threshold(args.alpha_sq)
    depth = min(k + 1, n)
    mosaics = compute_up_to_order(A, depth)
    T = build_tiling(rhomboid_stream(mosaics), depth, n=n)
    R = compute_radius_function(T, A)
    rows = [(v, c) for v, c in filtration(k, T, R) if v <= threshold]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value", "dimension", "generation", "anchor", "a_on", "vertices"])
        for v, c in rows:
            w.writerow([format_value(v), max(c.rhomboid.dimension - 1, 0), c.generation,
                        " ".join(map(str, c.anchor)), " ".join(map(str, c.rhomboid.a_on)),
                        ";".join(" ".join(map(str, q)) for q in c.vertices)])
        _emit(buf.getvalue(), args.out)
        return EXIT_OK
    doc = {
        "order": k,
        "alpha_sq": format_value(threshold),
        "filtration": [{"value": format_value(v), "dimension": max(c.rhomboid.dimension - 1, 0),
                        "generation": c.generation, "anchor": list(c.anchor),
                        "a_on": list(c.rhomboid.a_on), "vertices": [list(q) for q in c.vertices]}
                       for v, c in rows],
    }
    _emit(_dump(doc), args.out)
    return EXIT_OK


def cmd_stats(args):
    try:
        SampleSpec(args.kind, args.n, args.d, args.seed, args.digits)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    K = args.n if args.K is None else check_order(args.K, args.n, "--K")
    results = run_trials(args.kind, args.n, args.d, args.trials, args.seed, digits=args.digits,
                         K=K, check=not args.no_check, deterministic=args.deterministic)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{args.kind}_n{args.n}_d{args.d}"
    write_wide_csv(out / f"{stem}_counts.csv", args.kind, args.n, args.d, results)
    write_degree_csv(out / f"{stem}_degrees.csv", args.kind, args.n, args.d, results)
    write_cluster_csv(out / f"{stem}_clusters.csv", args.kind, args.n, args.d, results)
    write_summary_csv(out / f"{stem}_summary.csv", args.kind, args.n, args.d, results)
    checks = [(seed, c) for seed, _, c in results if c]
    if checks:
        names = list(checks[0][1])
        with open(out / f"{stem}_checks.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["seed"] + names)
            for seed, c in checks:
                w.writerow([seed] + [int(c[name]) for name in names])
        for name in names:
            passed = sum(c[name] for _, c in checks)
            print(f"{name}: {passed}/{len(checks)} trials pass")
    print(f"wrote {stem}_*.csv to {out}")
    return EXIT_OK


def cmd_sample(args):
    if args.input is not None:
        raise UsageError("sample generates points; --input is not accepted")
    if args.sample is None:
        args.sample = "unit_ball"
    A = _load_points(args)
    text = "".join(" ".join(format_decimal(x) for x in p) + "\n" for p in A)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args):
    if args.input is None and args.sample is None:
        args.sample = "unit_ball"
    A = _load_points(args)
    n = len(A)
    if n > MAX_ORACLE_POINTS and not args.allow_large:
        raise SizeGuardError(f"verify uses the brute-force oracle; n={n} exceeds "
                             f"{MAX_ORACLE_POINTS} (pass --allow-large)")
    K = n - 1 if args.K is None else check_order(args.K, n, "--K")
    if K < 1:
        raise UsageError("verify needs at least two points")
    mosaics = compute_up_to_order(A, K)
    ok = True
    for m in mosaics:
        same, report = mosaics_equal(m, brute_orderk(A, m.order, allow_large=args.allow_large))
        print(("ok       " if same else "MISMATCH ") + report)
        ok &= same
    print("pipeline agrees with the oracle" if ok else "pipeline differs from the oracle")
    return EXIT_OK if ok else EXIT_MISMATCH


# ------------------------------------------------------------------- parser

def build_parser():
    p = _Parser(prog="kdelaunay",
                description="Order-k Delaunay mosaics, rhomboid tilings and order-k alpha shapes.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("mosaic", help="write the order-1..K mosaics as JSON")
    _add_source(s)
    s.add_argument("--k", type=int, required=True, help="highest order K")
    s.add_argument("--perturb", help="rational perturbation magnitude, e.g. 1/1000000")
    s.add_argument("--perturb-seed", type=int, default=0)
    s.add_argument("--out", "-o", help="single JSON file with all orders (default stdout)")
    s.add_argument("--out-dir", help="write one mosaic_k<j>.json per order instead")
    s.set_defaults(func=cmd_mosaic)

    s = sub.add_parser("tiling", help="write the rhomboid tiling as JSON")
    _add_source(s)
    s.add_argument("--depth", type=int, help="keep rhomboids needed for orders up to DEPTH")
    s.add_argument("--embed", action="store_true", help="include vertex positions")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_tiling)

    s = sub.add_parser("alpha", help="write the order-k alpha filtration")
    _add_source(s)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--alpha-sq", default="inf", help="squared radius threshold, 'inf' for all")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_alpha)

    s = sub.add_parser("stats", help="per-order statistics over random trials as CSV")
    s.add_argument("--kind", choices=KINDS, default="unit_ball")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--seed", type=int, default=0, help="seed of the first trial")
    s.add_argument("--digits", type=int, default=6)
    s.add_argument("--K", type=int, help="highest order (default n)")
    s.add_argument("--no-check", action="store_true", help="skip the structural checks")
    s.add_argument("--deterministic", action="store_true",
                   help="single-threaded reference mode, ignoring KDELAUNAY_THREADS")
    s.add_argument("--out-dir", "-o", default="stats")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("sample", help="write a generated point set")
    _add_source(s)
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("verify", help="compare the pipeline with the brute-force oracle")
    _add_source(s)
    s.add_argument("--K", type=int, help="highest order checked (default n - 1)")
    s.add_argument("--allow-large", action="store_true",
                   help=f"run the oracle beyond {MAX_ORACLE_POINTS} points")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "perturb", None) is not None:
        try:
            args.perturb = Fraction(args.perturb)
        except (ValueError, ZeroDivisionError):
            print(f"kdelaunay: error: invalid --perturb {args.perturb!r}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, PointParseError, SizeGuardError) as exc:
        print(f"kdelaunay: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GeometryError as exc:
        print(f"kdelaunay: degenerate input: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValueError, TypeError) as exc:
        print(f"kdelaunay: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
