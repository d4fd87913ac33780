"""Topological pressure of derivative potentials and Bowen-equation roots.

The depth-n partition pressure of a system at exponent t is

    P_n(t) = (1/n) log sum_w |s_w'|^t        (w over admissible depth-n words)

evaluated twice, once with certified per-word suprema and once with infima,
giving an upper and a lower figure.  On a full shift both are rigorous
two-sided bounds for the limit pressure (sup-sums are submultiplicative,
inf-sums supermultiplicative); with a nontrivial incidence matrix only the
upper figure keeps that status and the lower one is a heuristic companion.
The gap between them is at most t * log(distortion bound) / depth.

The Hausdorff dimension of the limit set is the root of P(t) = 0.  Three
solvers are provided:

* ``bowen_solve``          — bisection on the midpoint of the depth-n bracket
                             (exact for full-shift similitudes at any depth);
* ``analytic_bowen_solve`` — for countable similitude families with a closed
                             form for log sum |a_i|^t, including the irregular
                             ones whose pressure jumps past zero without a
                             root;
* ``spectral_bowen_solve`` — bisection on the log Perron eigenvalue of the
                             depth-1 sup-weighted incidence matrix (the right
                             tool for graph-directed similitude systems;
                             useless for continued-fraction branches whose
                             first branch has derivative 1 somewhere).
"""

from __future__ import annotations

import math
from collections.abc import Sequence as SequenceABC
from dataclasses import dataclass
from typing import Callable, Iterable, Union

import numpy as np

from .systems import SimilitudeFamily, SystemSpec, level_geometry

__all__ = [
    "ConvergenceFailure",
    "PartitionSum",
    "PressureEstimate",
    "BowenSolution",
    "ScanRow",
    "TruncationScan",
    "partition_sum",
    "pressure",
    "bowen_solve",
    "analytic_pressure",
    "analytic_bowen_solve",
    "spectral_pressure",
    "spectral_bowen_solve",
    "truncation_scan",
]

EXACT_ZERO = 1e-15  # |pressure| below this counts as an exact hit
IRREGULAR_RESIDUAL = 1e-4  # larger leftover pressure at the root => no root


class ConvergenceFailure(RuntimeError):
    """An iterative solve ran out of iterations before reaching tolerance."""


@dataclass(frozen=True)
class PartitionSum:
    """Depth-n sum of derivative-bound powers, linear domain."""

    t: float
    depth: int
    upper: float
    lower: float


@dataclass(frozen=True)
class PressureEstimate:
    """Two-sided depth-n partition pressure at one exponent."""

    t: float
    depth: int
    upper: float
    lower: float

    @property
    def value(self) -> float:
        return 0.5 * (self.upper + self.lower)

    @property
    def gap(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class BowenSolution:
    """Root of the pressure equation (or the spot where it jumps past zero).

    ``regular`` is False when the pressure never actually vanishes: the
    reported ``h`` is then the infimum of exponents with negative pressure
    and ``residual`` the (strictly negative) pressure value there.
    """

    h: float
    bracket: tuple[float, float]
    residual: float
    regular: bool
    depth: int
    iterations: int
    method: str  # "word" | "analytic" | "operator"
    gap: float = 0.0  # pressure bracket width at the root (word method)


def _log_partition(system: SystemSpec, t: float, depth: int) -> tuple[float, float]:
    if t < 0:
        raise ValueError(f"exponent must be >= 0, got {t}")
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    lg = level_geometry(system, depth)
    if lg.count == 0:
        raise ValueError(f"no admissible words at depth {depth}")
    return _logsumexp(t * lg.log_sup), _logsumexp(t * lg.log_inf)


def partition_sum(system: SystemSpec, t: float, depth: int) -> PartitionSum:
    """Sum of sup|s_w'|^t (and of inf|s_w'|^t) over admissible depth-words.

    Accumulated in the log domain; the two figures coincide for similitudes.
    """
    log_upper, log_lower = _log_partition(system, t, depth)
    return PartitionSum(t=t, depth=depth, upper=math.exp(log_upper), lower=math.exp(log_lower))


def pressure(system: SystemSpec, t: float, depth: int = 12) -> PressureEstimate:
    log_upper, log_lower = _log_partition(system, t, depth)
    return PressureEstimate(t=t, depth=depth, upper=log_upper / depth, lower=log_lower / depth)


def _logsumexp(a: np.ndarray) -> float:
    if a.size == 0:
        return -math.inf
    m = float(np.max(a))
    # ascending sorted accumulation => result independent of enumeration order
    return m + math.log(float(np.sort(np.exp(a - m)).sum()))


def _bisect(
    f: Callable[[float], float],
    tol: float,
    max_iter: int,
    label: str,
) -> tuple[float, tuple[float, float], int]:
    """Find the sign change of a decreasing f on [0, inf); f may return +inf
    (counted as positive).  Returns (root, bracket, evaluations)."""
    evals = 0

    def val(t: float) -> float:
        nonlocal evals
        evals += 1
        if evals > max_iter:
            raise ConvergenceFailure(
                f"{label}: needs more than {max_iter} evaluations for tolerance {tol}"
            )
        return f(t)

    hi = 1.0
    fhi = val(hi)
    while fhi > 0.0:
        if abs(fhi) < EXACT_ZERO:
            return hi, (hi, hi), evals
        if hi > 2.0**40:
            raise ConvergenceFailure(f"{label}: pressure stays positive out to t = {hi}")
        hi *= 2.0
        fhi = val(hi)
    if abs(fhi) < EXACT_ZERO:
        return hi, (hi, hi), evals
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = val(mid)
        if abs(fm) < EXACT_ZERO:
            return mid, (mid, mid), evals
        if fm > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), (lo, hi), evals


def bowen_solve(
    system: SystemSpec,
    depth: int = 12,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> BowenSolution:
    """Bisect the midpoint of the two-sided depth-n pressure to its zero.

    Exact (up to tol) for full-shift similitude systems; for distortion-
    bounded systems the midpoint root sits within gap/(2 |dP/dt|) of the
    true Bowen root, with gap <= t log K / depth.
    """
    est_cache: dict[float, PressureEstimate] = {}

    def f(t: float) -> float:
        est_cache[t] = pressure(system, t, depth)
        return est_cache[t].value

    root, bracket, evals = _bisect(f, tol, max_iter, f"bowen_solve({system.label or 'system'})")
    final = est_cache.get(root) or pressure(system, root, depth)
    return BowenSolution(
        h=root,
        bracket=bracket,
        residual=final.value,
        regular=True,
        depth=depth,
        iterations=evals,
        method="word",
        gap=final.gap,
    )


# ---------------------------------------------------------------------------
# closed-form path for countable similitude families


def analytic_pressure(family: SimilitudeFamily, t: float) -> float:
    """log sum_i |a_i|^t over the whole countable family (may be +inf)."""
    if family.log_mass is None:
        raise ValueError(f"family {family.name!r} carries no closed-form mass")
    return family.log_mass(t)


def analytic_bowen_solve(
    family: SimilitudeFamily,
    tol: float = 1e-12,
    max_iter: int = 500,
) -> BowenSolution:
    """Root of the full-family pressure, or its jump point when no root
    exists.  Infinite pressure values are handled as 'positive' so the
    bisection also localizes the finiteness threshold of irregular families,
    which come back with regular=False and a negative residual.
    """
    root, bracket, evals = _bisect(
        lambda t: analytic_pressure(family, t), tol, max_iter, f"analytic({family.name})"
    )
    lo, hi = bracket
    left = analytic_pressure(family, lo)
    residual = analytic_pressure(family, hi)
    regular = math.isfinite(left) and abs(residual) <= IRREGULAR_RESIDUAL
    return BowenSolution(
        h=root,
        bracket=bracket,
        residual=residual,
        regular=regular,
        depth=0,
        iterations=evals,
        method="analytic",
    )


# ---------------------------------------------------------------------------
# spectral path: depth-1 weighted incidence matrix


def spectral_pressure(system: SystemSpec, t: float, tol: float = 1e-14) -> float:
    """log of the Perron eigenvalue of M[e, e2] = A[e, e2] * sup|s_e2'|^t.

    At t = 0 this is the log of the spectral radius of the incidence matrix
    itself (topological entropy of the subshift).
    """
    lg = level_geometry(system, 1)
    weights = np.exp(t * lg.log_sup)
    A = np.array(system.incidence_or_full().rows, dtype=float)
    M = A * weights[None, :]
    v = np.ones(len(weights))
    lam = 0.0
    for _ in range(5000):
        nv = M @ v
        total = nv.sum()
        if total <= 0.0:
            raise ConvergenceFailure("spectral_pressure: matrix is not primitive")
        new_lam = total / v.sum()
        v = nv / total
        if abs(new_lam - lam) <= tol * max(1.0, new_lam):
            return math.log(new_lam)
        lam = new_lam
    raise ConvergenceFailure("spectral_pressure: power iteration did not settle")


def spectral_bowen_solve(
    system: SystemSpec,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> BowenSolution:
    root, bracket, evals = _bisect(
        lambda t: spectral_pressure(system, t),
        tol,
        max_iter,
        f"spectral({system.label or 'system'})",
    )
    residual = spectral_pressure(system, root)
    return BowenSolution(
        h=root,
        bracket=bracket,
        residual=residual,
        regular=True,
        depth=1,
        iterations=evals,
        method="spectral",
    )


# ---------------------------------------------------------------------------
# truncation ladders


@dataclass(frozen=True)
class ScanRow:
    """One truncation level of a scan; h is NaN when the solve failed."""

    level: int
    h: float
    residual: float
    gap: float
    regular: bool
    depth: int
    note: str = ""


@dataclass(frozen=True)
class TruncationScan(SequenceABC):
    """Scan rows plus, when the source family has a closed-form pressure,
    the dimension of the full countable system the levels increase toward."""

    rows: tuple[ScanRow, ...]
    limit: float | None = None
    limit_regular: bool | None = None

    def __len__(self) -> int:
        return len(self.rows)

    def __getitem__(self, i):
        return self.rows[i]


def truncation_scan(
    source: Union[SimilitudeFamily, Callable[[int], SystemSpec]],
    levels: Iterable[int],
    depth: Union[int, Callable[[int], int], None] = None,
    tol: float = 1e-10,
) -> TruncationScan:
    """Bowen roots of the finite sub-systems at each level.

    Failed levels are recorded (h NaN, note set) and the scan moves on.
    Similitude truncations default to depth 1, where the partition pressure
    is already exact; everything else defaults to depth 12.  A callable
    depth receives the level, so wide alphabets can trade refinement depth
    for branching factor.
    """
    levels = list(levels)
    if any(n < 2 for n in levels):
        raise ValueError("truncation levels must be >= 2")
    rows: list[ScanRow] = []
    for n in levels:
        d = 0
        try:
            system = source.truncate(n) if isinstance(source, SimilitudeFamily) else source(n)
            if callable(depth):
                d = depth(n)
            elif depth is not None:
                d = depth
            else:
                d = 1 if system.is_similitude() else 12
            sol = bowen_solve(system, depth=d, tol=tol)
            rows.append(
                ScanRow(
                    level=n,
                    h=sol.h,
                    residual=sol.residual,
                    gap=sol.gap,
                    regular=sol.regular,
                    depth=sol.depth,
                )
            )
        except (ConvergenceFailure, ValueError) as err:
            rows.append(
                ScanRow(
                    level=n,
                    h=math.nan,
                    residual=math.nan,
                    gap=math.nan,
                    regular=False,
                    depth=d,
                    note=str(err),
                )
            )
    limit = limit_regular = None
    if isinstance(source, SimilitudeFamily) and source.log_mass is not None:
        lim_sol = analytic_bowen_solve(source)
        limit, limit_regular = lim_sol.h, lim_sol.regular
    return TruncationScan(rows=tuple(rows), limit=limit, limit_regular=limit_regular)
