"""Command-line front end.

Exit codes: 0 success, 1 empirical ratio outside tolerance, 2 invalid
input, 3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Optional

from .arith import DomainError, totient
from .empirical import count_up_to, fermat_counterexamples, scan_classes
from .extremal import Extremal, classify_extremal_params, exceptional_primes
from .params import extract_params
from .series import SeriesConsistencyError, density_series_params
from .tables import (
    TableIntegrityError,
    check_table_integrity,
    density_params,
    density_table0,
    dump_tables,
    table_lines,
)

EXIT_OK, EXIT_TOLERANCE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

DEFAULT_GRID = "a=2-12,16,25,27,36,81,256;b=1,2,3,5;d=1-60"
GRID_MAX = {"a": 10**6, "b": 10**6, "d": 1000}

CSV_HELP = """\
CSV columns:
  density   a,b,c,d,density,phi_d_density,table,row,extremal
  verify    a,b,c,d,x,total,dividing,ratio,ratio_decimal,expected,deviation,tolerance
  scan      a,b,c,d,x,total,dividing,ratio,ratio_decimal,expected
  fermat    conjecture,index,prime
Rationals are written as p/q in lowest terms; *_decimal columns are display only.
"""


class InputError(ValueError):
    pass


def parse_count(text: str) -> int:
    """An integer, allowing scientific notation such as 1e8."""
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value != value.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def parse_grid(text: str) -> dict[str, list[int]]:
    """``a=2-12,16;b=1,2;d=1-60`` -> lists of values per key."""
    grid: dict[str, list[int]] = {}
    for part in filter(None, (s.strip() for s in text.split(";"))):
        key, _, values = part.partition("=")
        key = key.strip()
        if key not in GRID_MAX or not values:
            raise InputError(f"bad grid component {part!r}; expected a=..., b=..., d=...")
        out: set[int] = set()
        for item in values.split(","):
            lo, sep, hi = item.strip().partition("-")
            try:
                lo_i = int(lo)
                hi_i = int(hi) if sep else lo_i
            except ValueError:
                raise InputError(f"bad grid value {item!r}") from None
            if lo_i < 1 or hi_i > GRID_MAX[key] or lo_i > hi_i:
                raise InputError(f"grid {key} values must lie in 1..{GRID_MAX[key]}")
            out.update(range(lo_i, hi_i + 1))
        grid[key] = sorted(out)
    missing = set(GRID_MAX) - set(grid)
    if missing:
        raise InputError(f"grid is missing {sorted(missing)}")
    return grid


def _dumps(record) -> str:
    return json.dumps(record, ensure_ascii=False)


def _csv(rows: Iterable[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if v is None else v for k, v in row.items()})
    return buf.getvalue().rstrip("\n")


def _progress_printer(enabled: bool):
    if not enabled:
        return None

    def report(primes: int, done: int, total: int) -> None:
        print(f"\r{done}/{total} segments, {primes} primes", end="", file=sys.stderr, flush=True)
        if done == total:
            print(file=sys.stderr)
    return report


# -- commands ---------------------------------------------------------------

def density_record(a: int, b: int, c: int, d: int, with_series: bool = False) -> dict:
    p = extract_params(a, b, c, d)
    res = density_params(p)
    ext = classify_extremal_params(p)
    record = {
        "density": str(res.density),
        "phi_d_density": str(res.phi_d_density),
        "table": str(res.table),
        "row": res.row,
        "extremal": str(ext.kind),
        "extremal_case": ext.case_label,
        "a": a, "b": b, "c": p.c, "d": d,
        "density_decimal": round(float(res.density), 9),
    }
    if with_series:
        value = density_series_params(p)
        if value != res.density:
            raise SeriesConsistencyError(
                f"series gives {value}, table {res.table} row {res.row} gives {res.density}")
        record["series"] = str(value)
    return record


def cmd_density(args) -> int:
    rec = density_record(args.a, args.b, args.c, args.d, args.series)
    if args.format == "json":
        print(_dumps(rec))
    elif args.format == "csv":
        print(_csv([rec], ["a", "b", "c", "d", "density", "phi_d_density", "table", "row", "extremal"]))
    else:
        print(f"delta_{{{args.a},{args.b}}}({rec['c']},{args.d}) = {rec['density']}"
              f"  (~{rec['density_decimal']})")
        print(f"phi(d)*density = {rec['phi_d_density']}")
        print(f"table {rec['table']}, row {rec['row']}")
        print(f"extremal: {rec['extremal']} (clause {rec['extremal_case']})")
        if "series" in rec:
            print(f"series sum = {rec['series']} (agrees)")
    return EXIT_OK


def tolerance(expected: Fraction, n: int) -> float:
    """max(0.01, 5 sqrt(s(1-s)/n)) for a class holding n primes."""
    if n == 0:
        return 1.0
    s = float(expected)
    return max(0.01, 5 * math.sqrt(s * (1 - s) / n))


def cmd_verify(args) -> int:
    p = extract_params(args.a, args.b, args.c, args.d)
    expected = density_params(p).phi_d_density
    count = count_up_to(args.a, args.b, args.c, args.d, args.limit, args.threads,
                        progress=_progress_printer(args.progress))
    rec = count.as_record()
    dev = None if count.ratio is None else abs(float(count.ratio - expected))
    tol = tolerance(expected, count.total)
    rec.update(expected=str(expected), deviation=dev, tolerance=round(tol, 6))
    ok = dev is not None and dev <= tol
    if args.format == "json":
        print(_dumps(rec))
    elif args.format == "csv":
        print(_csv([rec], ["a", "b", "c", "d", "x", "total", "dividing", "ratio", "ratio_decimal",
                           "expected", "deviation", "tolerance"]))
    else:
        print(f"primes p <= {args.limit} with p = {p.c} mod {args.d}: {count.total}")
        print(f"  dividing S_{{{args.a},{args.b}}}: {count.dividing}")
        if count.ratio is not None:
            print(f"  ratio {float(count.ratio):.6f}  exact phi(d)*density {expected}"
                  f" = {float(expected):.6f}")
            print(f"  deviation {dev:.6f}, tolerance {tol:.6f}: {'ok' if ok else 'OUTSIDE'}")
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_scan(args) -> int:
    counts = scan_classes(args.a, args.b, args.d, args.limit, args.threads,
                          progress=_progress_printer(args.progress))
    recs = []
    for cnt in counts:
        rec = cnt.as_record()
        rec["expected"] = str(density_params(extract_params(args.a, args.b, cnt.c, args.d)).phi_d_density)
        recs.append(rec)
    if args.format == "json":
        print(_dumps(recs))
    elif args.format == "csv":
        print(_csv(recs, ["a", "b", "c", "d", "x", "total", "dividing", "ratio", "ratio_decimal", "expected"]))
    else:
        for r in recs:
            shown = "n/a" if r["ratio_decimal"] is None else f"{r['ratio_decimal']:.6f}"
            print(f"{r['c']:>6} mod {args.d}: {r['dividing']:>10}/{r['total']:<10} {shown}"
                  f"   exact {r['expected']}")
    return EXIT_OK


def cmd_fermat(args) -> int:
    primes = fermat_counterexamples(args.conjecture, args.limit)
    if args.format == "json":
        print(_dumps({"conjecture": args.conjecture, "counterexamples": primes}))
    elif args.format == "csv":
        print(_csv(({"conjecture": args.conjecture, "index": i, "prime": q}
                    for i, q in enumerate(primes, 1)), ["conjecture", "index", "prime"]))
    else:
        print(", ".join(map(str, primes)))
    return EXIT_OK


def cmd_extremal(args) -> int:
    p = extract_params(args.a, args.b, args.c, args.d)
    ext = classify_extremal_params(p)
    rec = {"a": args.a, "b": args.b, "c": p.c, "d": args.d, "kind": str(ext.kind),
           "case": ext.case_label, "certificate": ext.certificate}
    if args.limit is not None:
        rec["x"] = args.limit
        rec["exceptions"] = exceptional_primes(args.a, args.b, p.c, args.d, args.limit)
    if args.format == "json":
        print(_dumps(rec))
    elif args.format == "csv":
        print(_csv([rec], ["a", "b", "c", "d", "kind", "case", "certificate"]))
    else:
        print(f"{ext.kind} (clause {ext.case_label})")
        print(f"  {ext.certificate}")
        if "exceptions" in rec:
            print(f"  exceptional primes <= {args.limit}: {rec['exceptions'] or 'none'}")
    return EXIT_OK


def run_selftest(grid: dict[str, list[int]], out=sys.stdout) -> tuple[int, int]:
    """Tables vs series, class sums vs the unconditional density, extremal agreement.

    Returns (mismatches, cases).
    """
    check_table_integrity()
    mismatches = cases = 0
    for a in grid["a"]:
        for b in grid["b"]:
            if a == b:
                continue
            whole = density_table0(a, b)
            for d in grid["d"]:
                phi = totient(d)
                class_sum = Fraction(0)
                for c in range(1, d + 1):
                    if math.gcd(c, d) != 1:
                        continue
                    cases += 1
                    p = extract_params(a, b, c, d)
                    res = density_params(p)
                    class_sum += res.density
                    problems = []
                    try:
                        series = density_series_params(p)
                    except SeriesConsistencyError as exc:
                        problems.append(str(exc))
                    else:
                        if series != res.density:
                            problems.append(f"table {res.row} {res.density} != series {series}")
                    kind = classify_extremal_params(p).kind
                    want = (Extremal.ZERO if res.density == 0
                            else Extremal.FULL if res.density * phi == 1 else Extremal.INTERMEDIATE)
                    if kind is not want:
                        problems.append(f"extremal {kind} but density {res.density}")
                    if problems:
                        mismatches += 1
                        print(f"MISMATCH a={a} b={b} c={c} d={d}: {'; '.join(problems)}", file=out)
                if class_sum != whole:
                    mismatches += 1
                    print(f"MISMATCH a={a} b={b} d={d}: class sum {class_sum} != {whole}", file=out)
    return mismatches, cases


def cmd_selftest(args) -> int:
    grid = parse_grid(args.grid)
    mismatches, cases = run_selftest(grid)
    if args.format == "json":
        print(_dumps({"mismatches": mismatches, "cases": cases}))
    else:
        print(f"{mismatches} mismatches / {cases} cases")
    return EXIT_OK if mismatches == 0 else EXIT_INTERNAL


def cmd_tables(args) -> int:
    if args.format == "json":
        print(_dumps(dump_tables()))
    elif args.format == "csv":
        rows = []
        for table, entries in dump_tables().items():
            for e in entries:
                rows.append({"table": table, "id": e["id"],
                             "conditions": "; ".join(f"{k}{v}" for k, v in e["conditions"].items()),
                             "value": e.get("phi_d_density", e.get("density")),
                             "note": e.get("note", "")})
        print(_csv(rows, ["table", "id", "conditions", "value", "note"]))
    else:
        print("\n".join(table_lines()))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _default_threads() -> int:
    raw = os.environ.get("SEQDIV_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqdiv",
        description="Density of primes p = c (mod d) dividing some a^k + b^k.",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sieve = argparse.ArgumentParser(add_help=False)
    sieve.add_argument("--limit", type=parse_count, default=10**6,
                       help="sieve primes up to this bound (accepts 1e8)")
    sieve.add_argument("--threads", type=int, default=_default_threads(),
                       help="worker threads (default: $SEQDIV_THREADS or 1)")
    sieve.add_argument("--progress", action="store_true", help="report sieve progress on stderr")

    sub = parser.add_subparsers(dest="command", required=True)

    def abcd(p):
        for name in "abcd":
            p.add_argument(name, type=int)

    p = sub.add_parser("density", parents=[common], help="exact density from the tables")
    abcd(p)
    p.add_argument("--series", action="store_true", help="also sum the field-degree series and compare")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("verify", parents=[common, sieve], help="compare the exact value with a prime count")
    abcd(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", parents=[common, sieve], help="prime counts for every class mod d")
    for name in "abd":
        p.add_argument(name, type=int)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("fermat", parents=[common], help="counterexamples to Fermat's claims 1.2-1.4")
    p.add_argument("conjecture", choices=("1.1", "1.2", "1.3", "1.4"))
    p.add_argument("--limit", type=parse_count, default=13, help="how many primes to list")
    p.set_defaults(func=cmd_fermat)

    p = sub.add_parser("extremal", parents=[common], help="is the density 0 or 1/phi(d), and why")
    abcd(p)
    p.add_argument("--limit", type=parse_count, default=None,
                   help="also list exceptional primes up to this bound")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("selftest", parents=[common], help="tables vs series vs class sums on a grid")
    p.add_argument("--grid", default=DEFAULT_GRID, help=f"grid description (default {DEFAULT_GRID!r})")
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("tables", parents=[common], help="print every table row")
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    limit = getattr(args, "limit", None)
    if args.command in ("verify", "scan") and limit < 2:
        print("error: --limit must be >= 2", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (SeriesConsistencyError, TableIntegrityError) as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (DomainError, InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
