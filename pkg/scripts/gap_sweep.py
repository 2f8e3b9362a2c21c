#!/usr/bin/env python3
"""Gaps between the named-criterion thresholds and p_ER for 2 <= d1 <= d2 <= d2_max.

Writes data/sweep.csv and prints the smallest gap per column.
"""
import argparse
import csv
from pathlib import Path

from xycrit import cli

COLUMNS = ("dv_minus_er", "e_minus_er", "f_minus_er", "r_minus_er")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d2-max", type=int, default=100)
    ap.add_argument("--out", type=Path, default=Path("data/sweep.csv"))
    args = ap.parse_args(argv)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    code = cli.main(["sweep", "--d2-max", str(args.d2_max), "--out", str(args.out)])
    if code:
        return code
    with args.out.open() as fh:
        rows = list(csv.DictReader(fh))
    for col in COLUMNS:
        print(f"min {col:12s} {min(float(r[col]) for r in rows): .3e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
