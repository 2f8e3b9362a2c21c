"""Command-line front end.

Subcommands::

    xycrit thresholds D1 D2        named thresholds with a bisection cross-check
    xycrit scan --d1 --d2 ...      p_xy over an (x, y) grid, plus tagged rows
    xycrit sweep --d2-max N ...    gaps p_* - p_ER over all 2 <= d1 <= d2 <= N
    xycrit verify --seed S ...     run the self-verification suite

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 failed
verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analytic, verify
from .bases import NAMED_CRITERIA, CriterionParams, norm_bound
from .criteria import (
    NoSignChangeError,
    criterion_handle,
    detection_threshold_numeric,
    isotropic_family,
    xy_handle,
)
from .tensor_core import BipartiteShape, DimensionError, NumericalError

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_VERIFY = 0, 1, 2, 3
WORKERS_ENV = "XYCRIT_WORKERS"
ON_HYPERBOLA_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    if n < 1:
        raise UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return n


def _shape(d1: int, d2: int) -> BipartiteShape:
    try:
        shape = BipartiteShape(d1, d2)
    except (DimensionError, TypeError) as exc:
        raise UsageError(str(exc))
    if not shape.is_ordered:
        raise UsageError(f"need 2 <= d1 <= d2, got d1={d1}, d2={d2}")
    return shape


# -- output ---------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if v is None:
        return ""
    return str(v)


def to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def to_json(meta: dict, rows: list[dict]) -> str:
    return json.dumps({"meta": meta, "rows": rows}, indent=1, allow_nan=False) + "\n"


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}")


def _format_for(args) -> str:
    if args.format:
        return args.format
    if args.out and Path(args.out).suffix.lower() == ".json":
        return "json"
    return "csv"


def _write(args, meta: dict, rows: list[dict], columns: list[str]):
    fmt = _format_for(args)
    text = to_json(meta, rows) if fmt == "json" else to_csv(rows, columns)
    _emit(text, args.out)


# -- thresholds -----------------------------------------------------------

THRESHOLD_COLUMNS = ["criterion", "x", "y", "analytic", "numeric", "abs_diff"]


def threshold_rows(shape: BipartiteShape, numeric: bool = True) -> list[dict]:
    t = analytic.named_thresholds(shape)
    family = isotropic_family(shape)
    on_curve = analytic.Hyperbola(shape, analytic.gamma(shape)).points(1.0, 2)[-1]
    entries = [("PPT", None, t.p_ppt, criterion_handle("PPT"))]
    values = {"dV": t.p_dv, "CCNR": t.p_r, "Fei": t.p_f, "ESIC": t.p_e}
    for name in NAMED_CRITERIA:
        entries.append((name, CriterionParams.named(name, shape), values[name], criterion_handle(name)))
    entries.append(("ER", None, t.p_er, criterion_handle("ER")))
    entries.append(("min", on_curve, t.p_min, xy_handle(on_curve)))

    rows = []
    for name, cp, value, handle in entries:
        row = {
            "criterion": name,
            "x": None if cp is None else cp.x,
            "y": None if cp is None else cp.y,
            "analytic": value,
            "numeric": None,
            "abs_diff": None,
        }
        if numeric:
            num = detection_threshold_numeric(family, handle)
            row["numeric"] = num
            row["abs_diff"] = abs(num - value)
        rows.append(row)
    return rows


def cmd_thresholds(args) -> int:
    shape = _shape(args.d1, args.d2)
    rows = threshold_rows(shape, numeric=not args.no_numeric)
    diffs = [r["abs_diff"] for r in rows if r["abs_diff"] is not None]
    max_diff = max(diffs) if diffs else None
    fmt = args.format or ("table" if args.out is None else _format_for(args))
    if fmt == "table":
        lines = [f"thresholds for d1={shape.d1}, d2={shape.d2}",
                 f"{'criterion':<9} {'analytic':>20} {'numeric':>20} {'|diff|':>10}"]
        for r in rows:
            num = "" if r["numeric"] is None else f"{r['numeric']:.15f}"
            diff = "" if r["abs_diff"] is None else f"{r['abs_diff']:.2e}"
            lines.append(f"{r['criterion']:<9} {r['analytic']:>20.15f} {num:>20} {diff:>10}")
        if max_diff is not None:
            lines.append(f"max |analytic - numeric| = {max_diff:.3e}")
        _emit("\n".join(lines) + "\n", args.out)
    elif fmt == "json":
        meta = {"command": "thresholds", "d1": shape.d1, "d2": shape.d2, "max_abs_diff": max_diff}
        _emit(to_json(meta, rows), args.out)
    else:
        _emit(to_csv(rows, THRESHOLD_COLUMNS), args.out)
    return EXIT_OK


# -- scan -----------------------------------------------------------------

SCAN_COLUMNS = ["tag", "x", "y", "p_xy", "a_sign", "on_hyperbola", "residual", "margin", "detected"]


@dataclass(frozen=True)
class ScanConfig:
    shape: BipartiteShape
    x_range: tuple[float, float, int]
    y_range: tuple[float, float, int]
    p: float | None = None
    output_format: str = "csv"
    output_path: str | None = None
    parallelism: int = 1
    hyperbola_points: int = 101
    extras: bool = True
    on_hyperbola_tol: float = field(default=ON_HYPERBOLA_TOL)

    def __post_init__(self):
        for name in ("x_range", "y_range"):
            lo, hi, steps = getattr(self, name)
            if not lo <= hi:
                raise UsageError(f"{name}: need lo <= hi, got {lo} > {hi}")
            if lo < 0:
                raise UsageError(f"{name}: x and y must be nonnegative")
            if steps < 2:
                raise UsageError(f"{name}: need at least 2 steps, got {steps}")
        if self.parallelism < 1:
            raise UsageError("parallelism must be >= 1")
        if self.p is not None and not 0 <= self.p <= 1:
            raise UsageError(f"p must lie in [0, 1], got {self.p}")

    @classmethod
    def default(cls, shape: BipartiteShape, steps: int = 201, **kw) -> "ScanConfig":
        top = float(np.sqrt(shape.d2 + 1) * 1.2)
        return cls(shape, (0.0, top, steps), (0.0, top, steps), **kw)


def scan_point(shape: BipartiteShape, cp: CriterionParams, tag: str, p: float | None, tol: float) -> dict:
    q = analytic.quadratic_case(shape, cp)
    residual = analytic.stationarity_check(shape, cp)
    row = {
        "tag": tag,
        "x": cp.x,
        "y": cp.y,
        "p_xy": q.p_minus,
        "a_sign": q.regime,
        "on_hyperbola": tag == "hyperbola" or abs(residual) <= tol,
        "residual": residual,
        "margin": None,
        "detected": None,
    }
    if p is not None:
        m = analytic.analytic_cxy_norm(shape, cp, p) - norm_bound(cp.x, cp.y, shape)
        row["margin"] = m
        row["detected"] = p > q.p_minus
    return row


def scan_rows(cfg: ScanConfig) -> list[dict]:
    xs = np.linspace(*cfg.x_range[:2], cfg.x_range[2])
    ys = np.linspace(*cfg.y_range[:2], cfg.y_range[2])

    def block(x):
        return [scan_point(cfg.shape, CriterionParams(float(x), float(y)), "grid", cfg.p, cfg.on_hyperbola_tol)
                for y in ys]

    if cfg.parallelism > 1:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            blocks = list(pool.map(block, xs))
    else:
        blocks = [block(x) for x in xs]
    rows = [r for b in blocks for r in b]
    if not cfg.extras:
        return rows

    for name in NAMED_CRITERIA:
        rows.append(scan_point(cfg.shape, CriterionParams.named(name, cfg.shape), name, cfg.p,
                               cfg.on_hyperbola_tol))
    curve = analytic.Hyperbola(cfg.shape, analytic.gamma(cfg.shape))
    for cp in curve.points(cfg.y_range[1], cfg.hyperbola_points):
        if cp.x <= cfg.x_range[1]:
            rows.append(scan_point(cfg.shape, cp, "hyperbola", cfg.p, cfg.on_hyperbola_tol))
    return rows


def cmd_scan(args) -> int:
    shape = _shape(args.d1, args.d2)
    top = float(np.sqrt(shape.d2 + 1) * 1.2)
    xmax = top if args.xmax is None else args.xmax
    ymax = top if args.ymax is None else args.ymax
    workers = args.workers if args.workers is not None else default_workers()
    cfg = ScanConfig(
        shape, (0.0, xmax, args.steps), (0.0, ymax, args.steps), p=args.p,
        output_format=_format_for(args), output_path=args.out, parallelism=workers,
        hyperbola_points=args.hyperbola_points, extras=not args.no_extras,
    )
    rows = scan_rows(cfg)
    meta = {
        "command": "scan", "d1": shape.d1, "d2": shape.d2,
        "grid": {"xmin": 0.0, "xmax": xmax, "ymin": 0.0, "ymax": ymax, "steps": args.steps},
        "p": args.p,
    }
    _write(args, meta, rows, SCAN_COLUMNS)
    return EXIT_OK


# -- sweep ----------------------------------------------------------------

SWEEP_COLUMNS = ["d1", "d2", "dv_minus_er", "e_minus_er", "f_minus_er", "r_minus_er"]


def sweep_rows(d1_max: int, d2_max: int) -> list[dict]:
    rows = []
    for d1 in range(2, d1_max + 1):
        for d2 in range(d1, d2_max + 1):
            t = analytic.named_thresholds(BipartiteShape(d1, d2))
            rows.append({
                "d1": d1, "d2": d2,
                "dv_minus_er": t.p_dv - t.p_er,
                "e_minus_er": t.p_e - t.p_er,
                "f_minus_er": t.p_f - t.p_er,
                "r_minus_er": t.p_r - t.p_er,
            })
    return rows


def cmd_sweep(args) -> int:
    d1_max = args.d2_max if args.d1_max is None else args.d1_max
    if d1_max < 2 or args.d2_max < 2:
        raise UsageError("dimension bounds must be >= 2")
    rows = sweep_rows(min(d1_max, args.d2_max), args.d2_max)
    meta = {"command": "sweep", "d1_max": d1_max, "d2_max": args.d2_max}
    _write(args, meta, rows, SWEEP_COLUMNS)
    return EXIT_OK


# -- verify ---------------------------------------------------------------

def parse_sizes(text: str) -> list[tuple[int, int]]:
    sizes = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            d1, d2 = (int(v) for v in chunk.lower().split("x"))
        except ValueError:
            raise UsageError(f"bad size {chunk!r}; expected D1xD2, e.g. 2x3")
        _shape(d1, d2)
        sizes.append((d1, d2))
    if not sizes:
        raise UsageError("no sizes given")
    return sizes


def cmd_verify(args) -> int:
    sizes = parse_sizes(args.sizes)
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")

    def progress(rec):
        if not args.quiet:
            print(f"[{'PASS' if rec['passed'] else 'FAIL'}] {rec['check']}", file=sys.stderr)

    report = verify.run_all(seed=args.seed, sizes=sizes, samples=args.samples,
                            witness_p=args.witness_p, progress=progress)
    _emit(json.dumps(report, indent=1, allow_nan=False) + "\n", args.out)
    if not report["passed"]:
        failed = ", ".join(r["check"] for r in report["rows"] if not r["passed"])
        print(f"verification failed: {failed}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# -- entry point ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xycrit", description="Correlation-tensor separability criteria on isotropic states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("thresholds", help="named detection thresholds for one dimension pair")
    p.add_argument("d1", type=int)
    p.add_argument("d2", type=int)
    p.add_argument("--format", choices=["table", "csv", "json"])
    p.add_argument("--out")
    p.add_argument("--no-numeric", action="store_true", help="skip the bisection cross-check")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("scan", help="p_xy over an (x, y) grid")
    p.add_argument("--d1", type=int, required=True)
    p.add_argument("--d2", type=int, required=True)
    p.add_argument("--xmax", type=float, help="default sqrt(d2+1)*1.2")
    p.add_argument("--ymax", type=float, help="default sqrt(d2+1)*1.2")
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--p", type=float, help="also report the criterion margin at this p")
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--workers", type=int, help=f"threads; default ${WORKERS_ENV} or 1")
    p.add_argument("--hyperbola-points", type=int, default=101)
    p.add_argument("--no-extras", action="store_true", help="grid rows only")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("sweep", help="threshold gaps over dimension pairs")
    p.add_argument("--d1-max", type=int)
    p.add_argument("--d2-max", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"])
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the self-verification suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sizes", default=",".join(f"{a}x{b}" for a, b in verify.DEFAULT_SIZES))
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--witness-p", type=float, default=verify.WITNESS_P)
    p.add_argument("--out")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"xycrit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, NoSignChangeError, analytic.InconsistentThresholdError) as exc:
        print(f"xycrit: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
