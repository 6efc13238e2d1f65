#!/usr/bin/env python3
"""Enumerate cylinder cells of the transfer map, write the cache file, and
summarize coverage plus the value distribution they induce.

Example:
    python scripts/cell_atlas.py --depth 2 --kappa-max 40 --cache cells.txt
"""
import argparse
import sys
from fractions import Fraction

from fareylab import area, enumerate_cells, nu_k_from_nu2, save_cells
from fareylab.triangle import covered_area


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--kappa-max", type=int, default=40)
    ap.add_argument("--cache", help="write the cell cache here")
    ap.add_argument("--top", type=int, default=12, help="how many cells to list")
    args = ap.parse_args()

    cells = enumerate_cells(args.depth, args.kappa_max)
    cov = covered_area(cells)
    uncovered = Fraction(1, 2) - cov
    bound = Fraction(2 * args.depth, (args.kappa_max + 1) * (args.kappa_max + 2))
    print(f"{len(cells)} cells at depth {args.depth}, cap {args.kappa_max}")
    print(f"covered {float(cov):.8f} of 0.5; uncovered {float(uncovered):.2e} "
          f"(bound {float(bound):.2e})")

    k = args.depth + 1
    weighted = sorted(
        cells, key=lambda c: nu_k_from_nu2(k, c.itinerary) * area(c.region), reverse=True
    )
    print(f"largest weight * area contributions to the nu_{k} average:")
    for c in weighted[: args.top]:
        w = nu_k_from_nu2(k, c.itinerary)
        print(f"  itinerary {c.itinerary}  weight {w:>5}  area {float(area(c.region)):.6f}")

    if args.cache:
        save_cells(args.cache, cells, args.depth, args.kappa_max)
        print(f"cache written to {args.cache}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
