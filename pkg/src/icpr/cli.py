"""Command-line interface.

Exit codes: 0 success, 1 a checked property failed (or a search budget ran
out), 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from math import isqrt
from multiprocessing import Pool
from typing import Sequence

from .decomp import (
    MAX_WIDTH,
    SMALL_DIAGONAL,
    SMALL_DIAGONAL_WIDTH,
    Decomposition,
    SymMat2,
    check_dnn,
    decompose,
    decompose_reduced,
    table3_regenerate,
    table3_summary,
    verify,
)
from .errors import BadRange, BudgetExceeded, ICPRError
from .oracle import DEFAULT_NODE_CAP, SearchBudget, exact_icpr_2x2
from .spanning import conjecture3_witness, find_spanning_vector, is_spanning, verify_sylvester_bound

EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return v


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        u = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"malformed vector {text!r}; expected e.g. 3,2,1,1")
    if any(x <= 0 for x in u):
        raise UsageError(f"vector entries must be positive: {text!r}")
    return u


def _fmt(v: Sequence[int]) -> str:
    return ",".join(map(str, v))


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _matrix(a: int, b: int, c: int) -> SymMat2:
    try:
        return SymMat2(a, b, c)
    except (TypeError, ValueError) as e:
        raise UsageError(str(e))


def certificate(A: SymMat2, D: Decomposition) -> dict:
    return {
        "matrix": {"a": A.a, "b": A.b, "c": A.c},
        "columns": [list(col) for col in D.columns],
        "width": D.width,
        "route": D.route.value,
        "repair": list(D.repair) if D.repair is not None else None,
        "verified": verify(A, D),
    }


def cmd_decompose(args) -> int:
    A = _matrix(args.a, args.b, args.c)
    if not check_dnn(A):
        raise UsageError(f"matrix {A.as_tuple()} is not doubly nonnegative")
    D = decompose(A)
    cert = certificate(A, D)
    if args.json:
        print(_dump(cert))
    else:
        print(f"matrix  {A.a} {A.b} {A.c}")
        print(f"width   {D.width}")
        print(f"route   {D.route.value}")
        print(f"repair  {_fmt(D.repair) if D.repair else '-'}")
        print("columns " + " ".join(f"({x},{y})" for x, y in D.columns))
    return EXIT_OK


def cmd_exact(args) -> int:
    A = _matrix(args.a, args.b, args.c)
    if not check_dnn(A):
        raise UsageError(f"matrix {A.as_tuple()} is not doubly nonnegative")
    try:
        budget = SearchBudget(width_cap=args.cap, node_cap=args.node_cap)
    except ValueError as e:
        raise UsageError(str(e))
    try:
        value = exact_icpr_2x2(A, budget)
    except BudgetExceeded as e:
        if args.json:
            print(_dump({"matrix": list(A.as_tuple()), "icpr": None, "exceeded": e.reason}))
        else:
            print(f"exceeded ({e.reason})")
        return EXIT_FAILED
    if args.json:
        print(_dump({"matrix": list(A.as_tuple()), "icpr": value, "exceeded": None}))
    else:
        print(value)
    return EXIT_OK


def cmd_span(args) -> int:
    if args.span_cmd == "check":
        u = parse_vector(args.vector)
        result = is_spanning(u)
        print(_dump({"vector": list(u), "spanning": result}) if args.json else str(result).lower())
    elif args.span_cmd == "find":
        if args.a < 1:
            raise UsageError("a must be positive")
        u = find_spanning_vector(args.a)
        if args.json:
            print(_dump({"a": args.a, "vector": list(u) if u else None}))
        else:
            print(_fmt(u) if u else "none")
    elif args.span_cmd == "witness":
        try:
            w = conjecture3_witness(args.a, args.b)
        except BadRange as e:
            raise UsageError(str(e))
        if args.json:
            print(_dump({"a": args.a, "b": args.b,
                         "u": list(w.u) if w else None, "v": list(w.v) if w else None}))
        else:
            print(f"u={_fmt(w.u)} v={_fmt(w.v)}" if w else "none")
    else:
        report = verify_sylvester_bound()
        print(_dump(report) if args.json else
              f"vector={_fmt(report['vector'])} norm_sq={report['norm_sq']} "
              f"spanning={str(report['spanning']).lower()} seconds={report['seconds']:.3f}")
        if not report["spanning"]:
            return EXIT_FAILED
    return EXIT_OK


def table_rows(which: str) -> tuple[list[str], list[list]]:
    if which == "t1":
        rows = []
        for a in range(1, 65):
            u = find_spanning_vector(a)
            rows.append([a, "true" if u else "false", _fmt(u) if u else ""])
        return ["a", "has_spanning", "vector"], rows
    if which == "t2":
        rows = []
        for b in range(1, 33):
            w = conjecture3_witness(33, b)
            rows.append([b, _fmt(w.u) if w else "", _fmt(w.v) if w else ""])
        return ["b", "u", "v"], rows
    table = table3_regenerate()
    rows = [[*t, p.x, p.y, *r.result, "true" if r.paper_pool_sufficed else "false"]
            for t, r in sorted(table.items()) for p in [r.pair]]
    header = ["alpha", "beta", "gamma", "x", "y", "alpha'", "beta'", "gamma'", "paper_pool_sufficed"]
    return header, rows


def cmd_tables(args) -> int:
    header, rows = table_rows(args.which)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    summary = None
    if args.which == "t3":
        summary = table3_summary(table3_regenerate())
    if args.out:
        try:
            with open(args.out, "w", newline="") as f:
                f.write(buf.getvalue())
        except OSError as e:
            raise UsageError(f"cannot write {args.out}: {e}")
        info = {"table": args.which, "rows": len(rows), "out": args.out}
        if summary:
            info["summary"] = summary
        print(_dump(info) if args.json else f"wrote {len(rows)} rows to {args.out}")
        if summary and not args.json:
            print(_t3_text(summary))
    else:
        sys.stdout.write(buf.getvalue())
        if summary:
            print(_t3_text(summary), file=sys.stderr)
    return EXIT_OK


def _t3_text(s: dict) -> str:
    failed = " ".join(f"({_fmt(t)})" for t in s["paper_pool_failed"]) or "none"
    return (f"bad triplets: {s['bad_triplets']}; listed 8 pairs suffice for "
            f"{s['paper_pool_sufficed']}; not for: {failed}")


@dataclass
class ScanReport:
    max_c: int
    assert_width: int
    scanned: int = 0
    histogram: Counter = field(default_factory=Counter)
    small_diagonal_histogram: Counter = field(default_factory=Counter)
    violations: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def max_width(self) -> int:
        return max(self.histogram, default=0)

    @property
    def small_diagonal_max_width(self) -> int:
        return max(self.small_diagonal_histogram, default=0)

    def merge(self, part: "ScanReport") -> None:
        self.scanned += part.scanned
        self.histogram.update(part.histogram)
        self.small_diagonal_histogram.update(part.small_diagonal_histogram)
        self.violations.extend(part.violations)

    def to_dict(self) -> dict:
        return {
            "range": f"0 <= a <= c <= {self.max_c}, 0 <= b, b^2 <= ac",
            "assert_width": self.assert_width,
            "scanned": self.scanned,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "max_width": self.max_width,
            "small_diagonal_bound": SMALL_DIAGONAL,
            "small_diagonal_histogram": {str(k): v for k, v in sorted(self.small_diagonal_histogram.items())},
            "small_diagonal_max_width": self.small_diagonal_max_width,
            "violations": self.violations,
            "seconds": round(self.seconds, 3),
        }


def scan_column(args: tuple[int, int, int]) -> ScanReport:
    """Scan every DNN matrix with the given c; used as the worker unit."""
    c, max_c, assert_width = args
    part = ScanReport(max_c, assert_width)
    for a in range(c + 1):
        for b in range(isqrt(a * c) + 1):
            A = SymMat2(a, b, c)
            try:
                D, R = decompose_reduced(A)
            except ICPRError as e:
                part.violations.append({"matrix": [a, b, c], "width": None, "reason": str(e)})
                continue
            w = D.width
            part.scanned += 1
            part.histogram[w] += 1
            small = R.a <= SMALL_DIAGONAL
            if small:
                part.small_diagonal_histogram[w] += 1
            if not verify(A, D):
                part.violations.append({"matrix": [a, b, c], "width": w, "reason": "verification failed"})
            elif w > assert_width:
                part.violations.append({"matrix": [a, b, c], "width": w, "reason": f"width > {assert_width}"})
            elif small and w > SMALL_DIAGONAL_WIDTH:
                part.violations.append({"matrix": [a, b, c], "width": w,
                                        "reason": f"width > {SMALL_DIAGONAL_WIDTH} with reduced a <= {SMALL_DIAGONAL}"})
    return part


def run_scan(max_c: int, assert_width: int = MAX_WIDTH, jobs: int = 1) -> ScanReport:
    start = time.perf_counter()
    report = ScanReport(max_c, assert_width)
    # largest c first: work grows like c^2, so this balances the pool
    tasks = [(c, max_c, assert_width) for c in range(max_c, -1, -1)]
    if jobs <= 1:
        parts = map(scan_column, tasks)
        for part in parts:
            report.merge(part)
    else:
        with Pool(jobs) as pool:
            for part in pool.imap_unordered(scan_column, tasks):
                report.merge(part)
    report.violations.sort(key=lambda v: (v["matrix"][2], v["matrix"][0], v["matrix"][1]))
    report.seconds = time.perf_counter() - start
    return report


def cmd_scan(args) -> int:
    if args.max_c < 1 or args.jobs < 1:
        raise UsageError("--max-c and --jobs must be positive")
    report = run_scan(args.max_c, args.assert_width, args.jobs)
    data = report.to_dict()
    if args.report:
        try:
            with open(args.report, "w") as f:
                json.dump(data, f, sort_keys=True, indent=1)
        except OSError as e:
            raise UsageError(f"cannot write {args.report}: {e}")
    if args.json:
        print(_dump(data))
    else:
        print(f"scanned {report.scanned} matrices with c <= {args.max_c} in {report.seconds:.1f}s")
        print("width histogram: " + " ".join(f"{k}:{v}" for k, v in sorted(report.histogram.items())))
        print(f"max width {report.max_width}; "
              f"max width with reduced a <= {SMALL_DIAGONAL}: {report.small_diagonal_max_width}")
        print(f"violations: {len(report.violations)}")
        for v in report.violations[:20]:
            print(f"  {v['matrix']} width={v['width']} {v['reason']}")
        if len(report.violations) > 20:
            print(f"  ... {len(report.violations) - 20} more")
    return EXIT_FAILED if report.violations else EXIT_OK


def load_columns(path: str) -> list[tuple[int, int]]:
    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path) as f:
                data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read certificate {path}: {e}")
    if isinstance(data, dict):
        data = data.get("columns")
    if not isinstance(data, list):
        raise UsageError("certificate must be a list of [x, y] columns or an object with 'columns'")
    cols = []
    for col in data:
        if (not isinstance(col, list) or len(col) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in col)):
            raise UsageError(f"malformed column {col!r}")
        cols.append((col[0], col[1]))
    return cols


def cmd_verify(args) -> int:
    A = _matrix(args.a, args.b, args.c)
    cols = load_columns(args.columns)
    ok = verify(A, cols)
    if args.json:
        print(_dump({"matrix": list(A.as_tuple()), "columns": [list(c) for c in cols], "verified": ok}))
    else:
        print("ok" if ok else "mismatch")
    return EXIT_OK if ok else EXIT_FAILED


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("ICPR_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="icpr", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    def matrix_args(p):
        for name in ("a", "b", "c"):
            p.add_argument(name, type=_nonneg_int)

    p = sub.add_parser("decompose", parents=[common], help="certificate B with B B^T = A")
    matrix_args(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("exact", parents=[common], help="exact integer CP rank by search")
    matrix_args(p)
    p.add_argument("--cap", type=int, default=12, help="width cap (default 12)")
    p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("span", parents=[common], help="spanning vector queries")
    span = p.add_subparsers(dest="span_cmd", required=True)
    q = span.add_parser("check", parents=[common])
    q.add_argument("vector")
    q = span.add_parser("find", parents=[common])
    q.add_argument("a", type=_nonneg_int)
    q = span.add_parser("witness", parents=[common])
    q.add_argument("a", type=_nonneg_int)
    q.add_argument("b", type=_nonneg_int)
    span.add_parser("sylvester", parents=[common])
    p.set_defaults(func=cmd_span)

    p = sub.add_parser("tables", parents=[common], help="regenerate tables as CSV")
    p.add_argument("which", choices=["t1", "t2", "t3"])
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("scan", parents=[common], help="decompose every DNN matrix with c <= max-c")
    p.add_argument("--max-c", type=int, required=True)
    p.add_argument("--assert-width", type=int, default=MAX_WIDTH)
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--report", help="write the JSON report here")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", parents=[common], help="check a certificate file against a b c")
    matrix_args(p)
    p.add_argument("columns", help="JSON file ('-' for stdin)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
