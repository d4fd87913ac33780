"""Independent reference roots for the geometric-ratio family truncations.

For each n this solves sum_{i=1}^n (2^-(i+1))^t = 1 by plain bisection on
the partial sum — pure stdlib, no package code — and records the limit
exponent log((1+sqrt 5)/2)/log 2 of the full family.  The frozen JSON next
to this script is what the test suite asserts against; rerun with

    python3 tests/oracles/golden_truncation_roots.py

to regenerate it.
"""

import json
import math
import pathlib


def partial_sum(t: float, n: int) -> float:
    return sum((2.0 ** -(i + 1)) ** t for i in range(1, n + 1))


def root(n: int) -> float:
    lo, hi = 0.0, 1.0  # partial_sum(0) = n > 1, partial_sum(1) = 1/2 - 2^-(n+1) < 1
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if partial_sum(mid, n) > 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def main() -> None:
    out = {str(n): root(n) for n in range(2, 13)}
    out["limit"] = math.log((1.0 + math.sqrt(5.0)) / 2.0) / math.log(2.0)
    path = pathlib.Path(__file__).with_suffix(".json")
    path.write_text(json.dumps(out, indent=1) + "\n")
    for k, v in out.items():
        print(f"{k:>6}: {v:.15f}")


if __name__ == "__main__":
    main()
