#!/usr/bin/env python3
"""Analytic thresholds next to their SVD-bisection counterparts for a few dimension pairs."""
import sys

from xycrit import cli

DIMS = ((2, 2), (2, 3), (3, 3), (2, 5), (3, 4), (2, 20))

if __name__ == "__main__":
    for d1, d2 in DIMS:
        print(f"# d1={d1} d2={d2}")
        code = cli.main(["thresholds", str(d1), str(d2)])
        if code:
            sys.exit(code)
