#!/usr/bin/env python3
"""Scan a quadratic-form zeta along the real axis and compare pipelines.

For each point the regularized-sum pipeline value is printed next to the
theta-transform continuation, with the absolute gap.  Points landing on the
pole 2s = d are skipped.

    python3 scripts/epstein_scan.py
    python3 scripts/epstein_scan.py --form "1,1/2;1/2,1" --lo -2 --hi 3 --n 21
    python3 scripts/epstein_scan.py --csv scan.csv
"""

import argparse
import csv
import sys
import time

import symzeta as sz


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--form", default="1,0;0,1", help='matrix, row-major, e.g. "1,1/2;1/2,1"')
    ap.add_argument("--lo", type=float, default=-2.0)
    ap.add_argument("--hi", type=float, default=3.0)
    ap.add_argument("--n", type=int, default=11)
    ap.add_argument("--csv", default=None, help="also write rows to this file")
    args = ap.parse_args()

    q = sz.QuadraticForm.from_rows(
        [[e for e in row.split(",")] for row in args.form.split(";")]
    )
    d = q.dimension
    step = (args.hi - args.lo) / max(args.n - 1, 1)
    rows = []
    print(f"# form = {args.form}   d = {d}")
    print(f"{'s':>8}  {'pipeline':>12}  {'regularized sum':>22}  {'theta oracle':>22}  {'gap':>10}  {'dt[s]':>6}")
    for i in range(args.n):
        s = args.lo + i * step
        if abs(2 * s - d) < 1e-9:
            print(f"{s:8.3f}  {'(pole)':>12}")
            continue
        t0 = time.perf_counter()
        res = sz.quadratic_zeta(q, s)
        dt = time.perf_counter() - t0
        oracle = complex(sz.epstein_oracle(q, s).value)
        gap = abs(res.value - oracle)
        print(
            f"{s:8.3f}  {res.diagnostics['pipeline']:>12}  {res.value.real:22.15g}"
            f"  {oracle.real:22.15g}  {gap:10.2e}  {dt:6.2f}"
        )
        rows.append((s, res.diagnostics["pipeline"], res.value.real, oracle.real, gap))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["s", "pipeline", "value", "oracle", "gap"])
            w.writerows(rows)
        print(f"# wrote {len(rows)} rows to {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
