"""Empirical dimension estimators for measures on the line.

Three complementary probes: the correlation integral of a sample cloud
(slope of ``log C(r)`` against ``log r``), per-point logarithmic density
fields with quantile bounds, and a left-interval flatness detector that
certifies vanishing correlation dimension.  None of these estimate the
Hausdorff-type quantities directly — for system-backed measures those are
reported through the pressure/ratio pathway, and otherwise only bracketed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .measures import CylinderMeasure, LineMeasure, SampleCloud
from .systems import level_geometry

__all__ = [
    "CorrelationCurve",
    "DensityField",
    "DimensionReport",
    "FlatnessCurve",
    "ScalingBounds",
    "YoungCriterion",
    "correlation_curve",
    "density_field",
    "flatness_detector",
    "scaling_quantile_bounds",
    "young_criterion",
]

PointSource = Union[SampleCloud, np.ndarray, Sequence[float]]


def _as_points(source: PointSource) -> np.ndarray:
    pts = np.asarray(getattr(source, "points", source), dtype=float)
    if pts.ndim != 1:
        raise ValueError(f"points must be one-dimensional, got shape {pts.shape}")
    return pts


# ---------------------------------------------------------------------------
# correlation integral


@dataclass(frozen=True, eq=False)
class CorrelationCurve:
    """Pair-correlation integral C(r) on a geometric radius grid.

    ``values[j]`` counts ordered pairs (diagonal included) at distance at
    most ``radii[j]``, divided by N^2 — so the curve starts no lower than
    1/N and never exceeds 1.  ``slope`` is the least-squares slope of
    log C against log r over ``fit_window``; ``degenerate`` marks clouds
    whose points all coincide (slope pinned to zero).
    """

    radii: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    fit_window: tuple[float, float]
    slope: float
    slope_stderr: float
    degenerate: bool = False

    def as_csv(self) -> str:
        lines = ["r,correlation"]
        lines += [f"{r:.17g},{c:.17g}" for r, c in zip(self.radii, self.values)]
        return "\n".join(lines) + "\n"


def correlation_curve(
    cloud: PointSource,
    r_min: float,
    r_max: float,
    count: int = 24,
    fit_window: Optional[tuple[float, float]] = None,
) -> CorrelationCurve:
    """Exact pair counting on a sorted cloud, then a log-log slope fit.

    The default fit window trims half a decade off both ends of the radius
    grid (edge radii are dominated by discreteness and saturation).  A
    cloud of fewer than a few hundred points gives a statistically
    meaningless slope; the hard floor here is two points.
    """
    pts = np.sort(_as_points(cloud))
    n = pts.size
    if n < 2:
        raise ValueError(f"need at least two points, got {n}")
    if not (0.0 < r_min < r_max):
        raise ValueError(f"need 0 < r_min < r_max, got ({r_min}, {r_max})")
    if count < 2:
        raise ValueError(f"need at least two radii, got {count}")

    radii = np.geomspace(r_min, r_max, count)
    counts = np.empty(count)
    for j, r in enumerate(radii):
        hi = np.searchsorted(pts, pts + r, side="right")
        lo = np.searchsorted(pts, pts - r, side="left")
        counts[j] = float((hi - lo).sum())
    values = counts / float(n) ** 2

    if fit_window is None:
        half_decade = math.sqrt(10.0)
        fit_window = (r_min * half_decade, r_max / half_decade)
    lo_w, hi_w = fit_window
    if pts[-1] == pts[0]:
        return CorrelationCurve(radii, values, fit_window, 0.0, 0.0, degenerate=True)

    mask = (radii >= lo_w) & (radii <= hi_w)
    if mask.sum() < 2:
        raise ValueError(
            f"fit window ({lo_w:.3g}, {hi_w:.3g}) holds fewer than two grid radii"
        )
    x = np.log(radii[mask])
    y = np.log(values[mask])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    dof = x.size - 2
    if dof > 0:
        var = float(resid @ resid) / dof / float(((x - x.mean()) ** 2).sum())
        stderr = math.sqrt(var)
    else:
        stderr = 0.0
    return CorrelationCurve(radii, values, fit_window, float(slope), stderr)


# ---------------------------------------------------------------------------
# logarithmic density fields


@dataclass(frozen=True, eq=False)
class DensityField:
    """Per-point bounds on log nu(B(x,r)) / log r over a radius ladder.

    ``lower``/``upper`` are the min/max of the ratio over the ladder, with
    cylinder-bracketing slack folded in when the measure is only known on
    cylinders.  ``inside`` marks points whose largest ball carries positive
    mass; the others are excluded from all summaries.
    """

    points: np.ndarray = field(repr=False)
    lower: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)
    inside: np.ndarray = field(repr=False)
    radii: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.points)

    def as_csv(self) -> str:
        lines = ["x,lower,upper,inside"]
        lines += [
            f"{x:.17g},{lo:.17g},{hi:.17g},{int(flag)}"
            for x, lo, hi, flag in zip(self.points, self.lower, self.upper, self.inside)
        ]
        return "\n".join(lines) + "\n"


def _dyadic_ladder(r_min: float, r_max: float) -> np.ndarray:
    if not (0.0 < r_min < r_max < 1.0):
        raise ValueError(
            f"radii must satisfy 0 < r_min < r_max < 1, got ({r_min}, {r_max})"
        )
    steps = int(math.floor(math.log2(r_max / r_min))) + 1
    return r_max * 0.5 ** np.arange(steps)


def _line_ball_mass_matrix(
    measure: LineMeasure, pts: np.ndarray, radii: np.ndarray
) -> np.ndarray:
    """Closed-ball masses for every (point, radius) pair, vectorised."""
    lo = pts[:, None] - radii[None, :]
    hi = pts[:, None] + radii[None, :]
    mass = np.zeros_like(lo)
    for plo, phi, dens in measure.pieces:
        mass += dens * np.clip(np.minimum(hi, phi) - np.maximum(lo, plo), 0.0, None)
    for loc, weight in measure.atoms:
        mass += weight * ((lo <= loc) & (loc <= hi))
    return mass


def _cylinder_interval_table(measure: CylinderMeasure):
    """Deepest-level image intervals sorted by position, with mass prefix sums."""
    lg = level_geometry(measure.system, measure.depth)
    masses = measure.level(measure.depth)
    order = np.argsort(lg.image_lo)
    los = lg.image_lo[order]
    his = lg.image_hi[order]
    pref = np.concatenate([[0.0], np.cumsum(masses[order])])
    return los, his, pref


def density_field(
    measure: Union[LineMeasure, CylinderMeasure],
    points: PointSource,
    r_min: float,
    r_max: float,
) -> DensityField:
    """Evaluate the density ratio ladder at each point.

    LineMeasure masses are exact; CylinderMeasure balls are bracketed by
    the deepest stored cylinder level (inner: cylinders contained in the
    ball; outer: cylinders meeting it), and the bracket is folded into the
    [lower, upper] estimates.  Ladder radii finer than the cylinder
    resolution contribute nothing to the bracket and are skipped.
    """
    pts = _as_points(points)
    radii = _dyadic_ladder(r_min, r_max)
    log_r = np.log(radii)
    n = pts.size
    ratio_lo = np.full((n, radii.size), np.nan)
    ratio_hi = np.full((n, radii.size), np.nan)

    if isinstance(measure, CylinderMeasure):
        los, his, pref = _cylinder_interval_table(measure)
        for j, r in enumerate(radii):
            left, right = pts - r, pts + r
            outer = pref[np.searchsorted(los, right, side="right")] - pref[
                np.searchsorted(his, left, side="left")
            ]
            inner = pref[np.searchsorted(his, right, side="right")] - pref[
                np.searchsorted(los, left, side="left")
            ]
            inner = np.maximum(inner, 0.0)
            with np.errstate(divide="ignore"):
                ratio_lo[:, j] = np.where(outer > 0, np.log(outer) / log_r[j], np.nan)
                ratio_hi[:, j] = np.where(inner > 0, np.log(inner) / log_r[j], np.nan)
    else:
        mass = _line_ball_mass_matrix(measure, pts, radii)
        with np.errstate(divide="ignore"):
            ratio = np.where(mass > 0, np.log(mass) / log_r[None, :], np.nan)
        ratio_lo = ratio
        ratio_hi = ratio.copy()

    inside = ~np.isnan(ratio_lo[:, 0])
    lower = np.zeros(n)
    upper = np.zeros(n)
    if inside.any():
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            lower[inside] = np.nanmin(ratio_lo[inside], axis=1)
            upper[inside] = np.nanmax(ratio_hi[inside], axis=1)
    lower = np.maximum(np.where(np.isnan(lower), 0.0, lower), 0.0)
    upper = np.maximum(np.where(np.isnan(upper), np.inf, upper), lower)
    return DensityField(points=pts, lower=lower, upper=upper, inside=inside, radii=radii)


@dataclass(frozen=True)
class YoungCriterion:
    """Empirical exact-dimensionality check: one exponent carries the mass."""

    c: float
    fraction: float
    band: float


def young_criterion(fld: DensityField, band: float = 0.05) -> YoungCriterion:
    """Median midpoint exponent and the mass fraction pinned to it.

    A fraction near one says the per-point exponent intervals concentrate
    at a single value c — the empirical shadow of exact dimensionality; a
    visibly smaller fraction flags multi-scale (bimodal or worse) behaviour.
    """
    mask = fld.inside
    if not mask.any():
        raise ValueError("density field has no points inside the support")
    lower, upper = fld.lower[mask], fld.upper[mask]
    mid = 0.5 * (lower + upper)
    c = float(np.median(mid))
    hit = (lower >= c - band) & (upper <= c + band)
    return YoungCriterion(c=c, fraction=float(hit.mean()), band=band)


@dataclass(frozen=True)
class ScalingBounds:
    """Quantile proxies for the essential range of local exponents."""

    lower: float
    upper: float
    quantile: float


def scaling_quantile_bounds(fld: DensityField, quantile: float = 0.05) -> ScalingBounds:
    """Robust [gamma_lower, gamma_upper] bracket from the field quantiles.

    The q-quantile of the per-point lower exponents bounds the dimension
    from below, the (1-q)-quantile of the uppers from above; q = 0.05 is a
    robustness choice, surfaced so callers can tighten it.
    """
    mask = fld.inside
    if not mask.any():
        raise ValueError("density field has no points inside the support")
    if not (0.0 <= quantile < 0.5):
        raise ValueError(f"quantile must lie in [0, 0.5), got {quantile}")
    finite_upper = fld.upper[mask]
    finite_upper = finite_upper[np.isfinite(finite_upper)]
    upper = float(np.quantile(finite_upper, 1.0 - quantile)) if finite_upper.size else math.inf
    lower = float(np.quantile(fld.lower[mask], quantile))
    return ScalingBounds(lower=lower, upper=max(upper, lower), quantile=quantile)


# ---------------------------------------------------------------------------
# flatness detector


@dataclass(frozen=True, eq=False)
class FlatnessCurve:
    """Certified left-interval exponents e(r); near-zero means flat.

    For each radius the detector maximises, over candidate cut points s,
    the product inf_{x in [0,s]} nu(B(x,r)) * nu([0,s]), and reports
    e(r) = log(bound)/log(r).  Exponents sliding to zero certify that the
    correlation dimension (and its modified variant) vanish.
    """

    radii: np.ndarray = field(repr=False)
    exponents: np.ndarray = field(repr=False)
    bounds: np.ndarray = field(repr=False)
    fired: bool
    threshold: float

    def as_csv(self) -> str:
        lines = ["r,bound,exponent"]
        lines += [
            f"{r:.17g},{b:.17g},{e:.17g}"
            for r, b, e in zip(self.radii, self.bounds, self.exponents)
        ]
        return "\n".join(lines) + "\n"


def _left_interval_bound(measure: LineMeasure, s: float, r: float) -> float:
    """inf over x in [0, s] of nu((x-r, x+r)), times nu([0, s]), exactly.

    The open-ball mass is piecewise affine in x with breakpoints where
    x +- r crosses an atom or piece edge, so the infimum is attained on
    the breakpoint grid.
    """
    locs = [a for a, _ in measure.atoms]
    for lo, hi, _ in measure.pieces:
        locs.extend((lo, hi))
    cuts = {0.0, s}
    for loc in locs:
        for x in (loc - r, loc + r):
            if 0.0 <= x <= s:
                cuts.add(x)
    inf_ball = min(
        measure.mass_of_interval(x - r, x + r, closed=False) for x in sorted(cuts)
    )
    return inf_ball * measure.mass_of_interval(0.0, s, closed=True)


def flatness_detector(
    measure: LineMeasure,
    radii: Sequence[float],
    candidates: Optional[Sequence[float]] = None,
    threshold: float = 0.25,
) -> FlatnessCurve:
    """Scan a radius ladder for mass concentration near the left endpoint.

    Candidate cut points default to the measure's own geometry (piece
    edges, atom locations, the full interval) plus r/2 for each radius —
    enough to realise the optimal cut for staircase-type measures without
    searching a continuum.  ``fired`` reports whether the exponent at the
    smallest radius dropped below ``threshold``.
    """
    lo_supp, hi_supp = measure.support_bounds
    if lo_supp < 0.0 or hi_supp > 1.0:
        raise ValueError(
            f"measure must be supported in [0, 1], found [{lo_supp}, {hi_supp}]"
        )
    radii = np.asarray(radii, dtype=float)
    if radii.size == 0 or not ((radii > 0.0) & (radii < 1.0)).all():
        raise ValueError("radii must be a nonempty ladder inside (0, 1)")

    if candidates is None:
        base = {1.0}
        base.update(a for a, _ in measure.atoms)
        for lo, hi, _ in measure.pieces:
            base.update((lo, hi))
        candidates = base
    fixed = [s for s in candidates if 0.0 < s <= 1.0]
    if not fixed:
        raise ValueError("no candidate cut points in (0, 1]")

    bounds = np.empty(radii.size)
    for j, r in enumerate(radii):
        cuts = fixed + [r / 2.0]
        bounds[j] = max(_left_interval_bound(measure, s, r) for s in cuts)
    with np.errstate(divide="ignore"):
        exponents = np.where(bounds > 0, np.log(bounds) / np.log(radii), np.inf)
    exponents = np.maximum(exponents, 0.0)
    tightest = int(np.argmin(radii))
    return FlatnessCurve(
        radii=radii,
        exponents=exponents,
        bounds=bounds,
        fired=bool(exponents[tightest] <= threshold),
        threshold=threshold,
    )


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class DimensionReport:
    """Side-by-side dimension estimates with mutual-consistency flags.

    ``bowen_root`` and ``ratio`` come from the pressure/operator pathway
    (system-backed measures only); ``correlation_slope`` from samples;
    ``gamma_lower``/``gamma_upper`` from the density-field quantiles.  The
    correlation estimate is always a lower-bound-style quantity for the
    modified variant, so the report records bounds, never equalities.
    """

    bowen_root: Optional[float] = None
    ratio: Optional[float] = None
    correlation_slope: Optional[float] = None
    gamma_lower: Optional[float] = None
    gamma_upper: Optional[float] = None
    tolerance: float = 0.05

    def __post_init__(self) -> None:
        if (
            self.gamma_lower is not None
            and self.gamma_upper is not None
            and self.gamma_lower > self.gamma_upper + 1e-12
        ):
            raise ValueError(
                f"gamma_lower={self.gamma_lower} exceeds gamma_upper={self.gamma_upper}"
            )

    def flags(self) -> dict[str, bool]:
        out: dict[str, bool] = {}
        pointwise = {
            "bowen_root": self.bowen_root,
            "ratio": self.ratio,
            "correlation_slope": self.correlation_slope,
        }
        names = [k for k, v in pointwise.items() if v is not None]
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                out[f"{a}~{b}"] = (
                    abs(pointwise[a] - pointwise[b]) <= self.tolerance  # type: ignore[operator]
                )
        if self.gamma_lower is not None and self.gamma_upper is not None:
            for name in names:
                out[f"{name}~bracket"] = (
                    self.gamma_lower - self.tolerance
                    <= pointwise[name]  # type: ignore[operator]
                    <= self.gamma_upper + self.tolerance
                )
        return out

    @property
    def consistent(self) -> bool:
        flags = self.flags()
        return all(flags.values()) if flags else True

    def json_dict(self) -> dict:
        return {
            "bowen_root": self.bowen_root,
            "ratio": self.ratio,
            "correlation_slope": self.correlation_slope,
            "gamma_lower": self.gamma_lower,
            "gamma_upper": self.gamma_upper,
            "tolerance": self.tolerance,
            "flags": self.flags(),
            "consistent": self.consistent,
        }
