#!/usr/bin/env python3
"""Empirical averages of nu_k against the geometric enclosure as Q grows.

Example:
    python scripts/convergence_experiment.py --k 3 --orders 100,1000,10000
"""
import argparse
import csv
import sys

from fareylab import convergence_report


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--orders", default="100,1000,10000")
    ap.add_argument("--kappa-max", type=int, default=60)
    ap.add_argument("--chunks", type=int, default=64)
    ap.add_argument("--csv", help="also write rows to this file")
    args = ap.parse_args()

    orders = [int(s) for s in args.orders.split(",")]
    rep = convergence_report(args.k, orders, kappa_max=args.kappa_max, chunks=args.chunks)
    itv = rep.interval
    print(f"k={args.k}  enclosure [{float(itv.lo):.6f}, {float(itv.hi):.6f}] "
          f"(cap {itv.kappa_max}, width {float(itv.width):.6f})")
    print(f"{'Q':>10} {'average':>14} {'distance':>12} {'(log Q)^2/Q':>12}")
    for row in rep.rows:
        print(f"{row.Q:>10} {float(row.empirical):>14.8f} "
              f"{float(row.distance):>12.3e} {row.model:>12.3e}")
    print("error-model consistent:", rep.consistent)

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["Q", "average", "distance", "model"])
            for row in rep.rows:
                w.writerow([row.Q, f"{row.empirical.numerator}/{row.empirical.denominator}",
                            f"{row.distance.numerator}/{row.distance.denominator}", row.model])
    return 0 if rep.consistent else 1


if __name__ == "__main__":
    sys.exit(main())
