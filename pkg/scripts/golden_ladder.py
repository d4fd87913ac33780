#!/usr/bin/env python3
"""Dimension ladder for the golden similitude family.

Prints the Bowen root of each truncation next to the analytic limit, the
depth-2 cylinder-mass discrepancy against the limit weights, and the
total-variation lower bound certifying that conformal measures of distinct
truncations are nearly mutually singular.
"""

import argparse

import numpy as np

from ifsdim.measures import truncation_singularity
from ifsdim.pressure import analytic_bowen_solve, bowen_solve, truncation_scan
from ifsdim.systems import golden_family


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--top", type=int, default=12, help="largest truncation level")
    parser.add_argument(
        "--singularity-depth", type=int, default=200, help="cylinder depth for the TV bound"
    )
    args = parser.parse_args()

    family = golden_family()
    limit = analytic_bowen_solve(family)
    scan = truncation_scan(family, range(2, args.top + 1))
    h_top = bowen_solve(family.truncate(args.top), depth=1).h

    print(f"analytic limit h = {limit.h:.12f}")
    print(f"{'n':>3} {'h_n':>16} {'limit - h_n':>12} {'depth-2 disc':>13} {'TV lower':>10}")
    for row in scan.rows:
        n = row.level
        ratios = np.array([family.ratio_fn(i) for i in range(1, n + 1)])
        weights = ratios**row.h
        weights /= weights.sum()
        limit_weights = ratios**limit.h
        disc = np.abs(np.kron(weights, weights) - np.kron(limit_weights, limit_weights)).max()
        tv = max(0.0, 1.0 - truncation_singularity(family, n, args.top, h_top, args.singularity_depth))
        print(f"{n:>3} {row.h:>16.12f} {limit.h - row.h:>12.3e} {disc:>13.3e} {tv:>10.6f}")


if __name__ == "__main__":
    main()
