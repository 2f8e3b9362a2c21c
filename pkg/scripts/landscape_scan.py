#!/usr/bin/env python3
"""Threshold landscapes p_xy over the (x, y) plane for the two reference dimension pairs.

Writes data/scan_3x3.csv and data/scan_2x20.csv. The a = 0 line for (2, 20) is
where the ``a_sign`` column flips.
"""
import argparse
from pathlib import Path

from xycrit import cli

DIMS = ((3, 3), (2, 20))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=201)
    ap.add_argument("--outdir", type=Path, default=Path("data"))
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args(argv)
    args.outdir.mkdir(parents=True, exist_ok=True)
    for d1, d2 in DIMS:
        out = args.outdir / f"scan_{d1}x{d2}.csv"
        argv = ["scan", "--d1", str(d1), "--d2", str(d2), "--steps", str(args.steps), "--out", str(out)]
        if args.workers:
            argv += ["--workers", str(args.workers)]
        code = cli.main(argv)
        if code:
            return code
        print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
