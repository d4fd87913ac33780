#!/usr/bin/env python3
"""Empirical dimension probes against a gallery measure.

Samples the chosen family member, then prints the correlation-integral
slope, the pointwise density summary, and (for measures supported in the
unit interval) whether the flat-density detector fires.  Useful for eyeing
how the estimators disagree on the pathological families.
"""

import argparse

import numpy as np

from ifsdim.dimension import (
    correlation_curve,
    density_field,
    flatness_detector,
    scaling_quantile_bounds,
    young_criterion,
)
from ifsdim.measures import GALLERY_NAMES, gallery, sample


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("family", choices=GALLERY_NAMES)
    parser.add_argument("--member", default="limit", help="'limit' or a stage index")
    parser.add_argument("--scale", type=float, default=0.5, help="staircase scale a")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--count", type=int, default=10_000)
    parser.add_argument("--r-min", type=float, default=1e-4)
    parser.add_argument("--r-max", type=float, default=0.25)
    args = parser.parse_args()

    fam = gallery(args.family, a=args.scale)
    if args.member == "limit":
        if fam.limit is None:
            parser.error(f"{args.family} has no closed-form limit; pass --member N")
        measure = fam.limit
    else:
        measure = fam.at(int(args.member))
    print(f"measure: {measure.label}   note: {fam.note}")

    cloud = sample(measure, args.count, seed=args.seed)
    curve = correlation_curve(cloud, args.r_min, args.r_max)
    print(f"correlation slope  {curve.slope:.4f} +- {curve.slope_stderr:.4f}"
          f"{'   (degenerate cloud)' if curve.degenerate else ''}")

    field = density_field(measure, cloud.points[:300], args.r_min, args.r_max)
    if field.inside.any():
        crit = young_criterion(field)
        bounds = scaling_quantile_bounds(field)
        print(f"density exponent   median {crit.c:.4f}, within-band fraction {crit.fraction:.2f}")
        print(f"quantile bounds    [{bounds.lower:.4f}, {bounds.upper:.4f}]")
    else:
        print("density exponent   no sample points carry measure mass")

    lo, hi = measure.support_bounds
    if 0.0 <= lo and hi <= 1.0:
        if args.family == "staircase":
            # the interesting radii sit at the interval edges a^(k^2)
            radii = [args.scale ** (k * k) for k in range(1, 9)]
        else:
            radii = list(np.geomspace(args.r_max, args.r_min, 10))
        flat = flatness_detector(measure, radii)
        verdict = "fires" if flat.fired else "does not fire"
        print(f"flatness detector  {verdict} (smallest-radius exponent "
              f"{flat.exponents[int(np.argmin(flat.radii))]:.4f})")


if __name__ == "__main__":
    main()
