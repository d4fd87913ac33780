"""Contracting map systems on real intervals.

A system is a finite collection of injective contractions between vertex
intervals, together with an incidence matrix saying which map may follow
which.  Two map kinds are supported:

* ``similitude`` / ``affine``: x -> a*x + b with 0 < |a| < 1,
* ``moebius``: x -> 1/(q+x) on [0, 1] with integer q >= 1
  (|derivative| = 1/(q+x)^2, the continued-fraction branches).

Everything downstream (pressure, conformal measures, transfer operators)
consumes certified per-word derivative bounds produced here.  Bounds come
from interval arithmetic propagated over a fixed subdivision of the base
interval (64 cells by default); since every branch and every |derivative|
is monotone on its domain, the only looseness is the lost correlation
between chain-rule factors, which the subdivision controls.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .symbolic import IncidenceMatrix, Word, enumerate_admissible

__all__ = [
    "InvalidSystem",
    "SeparationError",
    "MapDescriptor",
    "SystemSpec",
    "WordGeometry",
    "LevelGeometry",
    "SimilitudeFamily",
    "SeparationReport",
    "compose_geometry",
    "check_separation",
    "ensure_separation",
    "truncate",
    "level_geometry",
    "word_image",
    "golden_family",
    "borderline_family",
    "cantor_system",
    "continued_fraction_system",
    "gdms_system",
]

DEFAULT_GRID = 64
_OUTWARD = 1e-15  # relative inflation applied to final certified bounds


class InvalidSystem(ValueError):
    """The description does not define a usable contracting system."""


class SeparationError(InvalidSystem):
    """Depth-1 images fail the disjoint-interior separation condition."""


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class MapDescriptor:
    """One branch map.  ``domain_vertex``/``image_vertex`` index the vertex
    spaces the map goes between (both 0 for a plain IFS)."""

    kind: str  # "similitude" | "affine-1d" | "moebius-1d"
    ratio: float = 0.0  # similitude/affine slope a
    offset: float = 0.0  # similitude/affine intercept b
    q: int = 0  # moebius denominator shift
    domain_vertex: int = 0
    image_vertex: int = 0

    def __post_init__(self) -> None:
        if self.kind in ("similitude", "affine-1d"):
            if not (0.0 < abs(self.ratio) < 1.0):
                raise InvalidSystem(
                    f"{self.kind} ratio must satisfy 0 < |a| < 1, got {self.ratio}"
                )
        elif self.kind == "moebius-1d":
            if int(self.q) != self.q or self.q < 1:
                raise InvalidSystem(f"moebius parameter must be an integer >= 1, got {self.q}")
        else:
            raise InvalidSystem(f"unknown map kind {self.kind!r}")

    # All branches are monotone, so interval images are endpoint images.

    def apply(self, x):
        if self.kind == "moebius-1d":
            return 1.0 / (self.q + x)
        return self.ratio * x + self.offset

    def apply_interval(self, lo, hi):
        """Exact image of [lo, hi] (works elementwise on arrays)."""
        if self.kind == "moebius-1d":
            return 1.0 / (self.q + hi), 1.0 / (self.q + lo)
        if self.ratio >= 0:
            return self.ratio * lo + self.offset, self.ratio * hi + self.offset
        return self.ratio * hi + self.offset, self.ratio * lo + self.offset

    def deriv_abs_bounds(self, lo, hi):
        """Exact [min, max] of |derivative| over [lo, hi] (monotone)."""
        if self.kind == "moebius-1d":
            return 1.0 / (self.q + hi) ** 2, 1.0 / (self.q + lo) ** 2
        a = abs(self.ratio)
        return a * np.ones_like(np.asarray(lo, dtype=float)), a * np.ones_like(
            np.asarray(hi, dtype=float)
        )


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class SystemSpec:
    """A validated map system.

    ``incidence`` None means the full shift (every map may follow every
    map); that is only allowed when all maps share one vertex space.
    ``distortion_bound`` is the constant K with inf |s_w'| * K >= sup |s_w'|
    for every word w; ``word_contraction`` is the factor gamma with
    sup |s_w'| <= gamma^floor(|w|/2) (gamma^|w| for pure similitudes).
    """

    flavor: str  # "cifs" | "gdms"
    vertex_spaces: tuple[tuple[float, float], ...]
    maps: tuple[MapDescriptor, ...]
    incidence: Optional[IncidenceMatrix]
    distortion_bound: float
    word_contraction: float
    label: str = ""
    level: Optional[int] = None  # truncation level when cut from a family

    def __post_init__(self) -> None:
        if self.flavor not in ("cifs", "gdms"):
            raise InvalidSystem(f"unknown flavor {self.flavor!r}")
        if len(self.maps) < 2:
            raise InvalidSystem("a system needs at least two maps")
        if not self.vertex_spaces:
            raise InvalidSystem("at least one vertex space is required")
        for lo, hi in self.vertex_spaces:
            if not (lo < hi):
                raise InvalidSystem(f"degenerate vertex space [{lo}, {hi}]")
        nv = len(self.vertex_spaces)
        for m in self.maps:
            if not (0 <= m.domain_vertex < nv and 0 <= m.image_vertex < nv):
                raise InvalidSystem("map vertex index out of range")
            if m.kind == "moebius-1d":
                lo, hi = self.vertex_spaces[m.domain_vertex]
                if (lo, hi) != (0.0, 1.0):
                    raise InvalidSystem("moebius maps are defined on the vertex space [0, 1]")
        if self.flavor == "cifs":
            if any(m.domain_vertex != 0 or m.image_vertex != 0 for m in self.maps):
                raise InvalidSystem("a plain IFS lives on a single vertex space")
        if self.incidence is None:
            if len({(m.domain_vertex, m.image_vertex) for m in self.maps}) > 1:
                raise InvalidSystem("full-shift incidence needs all maps on one vertex pair")
        else:
            if self.incidence.size != len(self.maps):
                raise InvalidSystem("incidence size must match the number of maps")
            for e, row in enumerate(self.incidence.rows):
                for e2, v in enumerate(row):
                    if v and self.maps[e].domain_vertex != self.maps[e2].image_vertex:
                        raise InvalidSystem(
                            f"incidence allows {e}->{e2} but map {e2} lands in vertex "
                            f"{self.maps[e2].image_vertex}, map {e} starts from "
                            f"{self.maps[e].domain_vertex}"
                        )
        if self.distortion_bound < 1.0:
            raise InvalidSystem("distortion bound must be >= 1")
        if not (0.0 < self.word_contraction < 1.0):
            raise InvalidSystem("word contraction factor must lie in (0, 1)")

    @property
    def alphabet_size(self) -> int:
        return len(self.maps)

    def incidence_or_full(self) -> IncidenceMatrix:
        if self.incidence is not None:
            return self.incidence
        return IncidenceMatrix.full(self.alphabet_size)

    def is_similitude(self) -> bool:
        return all(m.kind in ("similitude", "affine-1d") for m in self.maps)

    def domain_of(self, symbol: int) -> tuple[float, float]:
        return self.vertex_spaces[self.maps[symbol].domain_vertex]


@dataclass(frozen=True)
class WordGeometry:
    """Certified geometry of one cylinder word: derivative bounds over the
    word's whole base interval, and the exact image interval."""

    word: Word
    deriv_sup: float
    deriv_inf: float
    image: tuple[float, float]

    @property
    def image_length(self) -> float:
        return self.image[1] - self.image[0]

    @property
    def distortion(self) -> float:
        return self.deriv_sup / self.deriv_inf


# ---------------------------------------------------------------------------
# bulk geometry: all admissible words of one depth at once


@dataclass
class LevelGeometry:
    """Vectorized word geometry for every admissible word of one depth,
    aligned with the lexicographic enumeration order."""

    depth: int
    log_sup: np.ndarray
    log_inf: np.ndarray
    image_lo: np.ndarray
    image_hi: np.ndarray
    first_symbol: np.ndarray

    @property
    def count(self) -> int:
        return self.log_sup.shape[0]


def _level_arrays(system: SystemSpec, depth: int, grid: int):
    """Prepend-BFS over admissible words.  State arrays have one row per
    word and one column per base-grid cell; build order is lexicographic."""
    m = system.alphabet_size
    inc = system.incidence
    rows = None if inc is None else np.array(inc.rows, dtype=bool)

    # depth-1 init: each symbol's domain subdivided into `grid` cells
    first = np.arange(m, dtype=np.int64)
    i_lo = np.empty((m, grid))
    i_hi = np.empty((m, grid))
    d_lo = np.empty((m, grid))
    d_hi = np.empty((m, grid))
    for e, mp in enumerate(system.maps):
        lo, hi = system.domain_of(e)
        edges = np.linspace(lo, hi, grid + 1)
        base_lo, base_hi = edges[:-1], edges[1:]
        i_lo[e], i_hi[e] = mp.apply_interval(base_lo, base_hi)
        d_lo[e], d_hi[e] = mp.deriv_abs_bounds(base_lo, base_hi)

    for _ in range(depth - 1):
        parts = []
        for e, mp in enumerate(system.maps):
            mask = slice(None) if rows is None else rows[e][first]
            sl, sh = i_lo[mask], i_hi[mask]
            if sl.shape[0] == 0:
                continue
            nl, nh = mp.apply_interval(sl, sh)
            flo, fhi = mp.deriv_abs_bounds(sl, sh)
            parts.append((np.full(sl.shape[0], e, dtype=np.int64),
                          nl, nh, d_lo[mask] * flo, d_hi[mask] * fhi))
        first = np.concatenate([p[0] for p in parts])
        i_lo = np.concatenate([p[1] for p in parts])
        i_hi = np.concatenate([p[2] for p in parts])
        d_lo = np.concatenate([p[3] for p in parts])
        d_hi = np.concatenate([p[4] for p in parts])
    return first, i_lo, i_hi, d_lo, d_hi


@functools.lru_cache(maxsize=64)
def level_geometry(system: SystemSpec, depth: int, grid: int = DEFAULT_GRID) -> LevelGeometry:
    """Certified derivative bounds and exact images for all depth-n words.

    For pure similitude systems the derivative is constant per word, so the
    grid is skipped and sup == inf exactly.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if system.is_similitude():
        first, i_lo, i_hi, d_lo, d_hi = _level_arrays(system, depth, grid=1)
        log_d = np.log(d_lo[:, 0])
        return LevelGeometry(depth, log_d, log_d.copy(), i_lo[:, 0], i_hi[:, 0], first)

    # exact image intervals: single-cell pass (monotone maps -> exact endpoints)
    first, j_lo, j_hi, _, _ = _level_arrays(system, depth, grid=1)
    _, _, _, d_lo, d_hi = _level_arrays(system, depth, grid)
    sup = d_hi.max(axis=1) * (1.0 + _OUTWARD)
    inf = d_lo.min(axis=1) * (1.0 - _OUTWARD)
    return LevelGeometry(depth, np.log(sup), np.log(inf), j_lo[:, 0], j_hi[:, 0], first)


def word_image(system: SystemSpec, word: Word) -> tuple[float, float]:
    """Exact image interval of one word (maps composed innermost-first)."""
    _check_word(system, word)
    lo, hi = system.domain_of(word.symbols[-1])
    for s in reversed(word.symbols):
        lo, hi = system.maps[s].apply_interval(lo, hi)
    return float(lo), float(hi)


def _check_word(system: SystemSpec, word: Word) -> None:
    m = system.alphabet_size
    if any(s >= m for s in word.symbols):
        raise ValueError(f"word {word} uses symbols outside the alphabet of size {m}")
    inc = system.incidence
    if inc is not None:
        for a, b in zip(word.symbols, word.symbols[1:]):
            if not inc.allows(a, b):
                raise ValueError(f"word {word} is not admissible ({a}->{b} forbidden)")


def compose_geometry(system: SystemSpec, word: Word, grid: int = DEFAULT_GRID) -> WordGeometry:
    """Certified derivative bounds and exact image for a single word."""
    _check_word(system, word)
    image = word_image(system, word)
    if system.is_similitude():
        d = 1.0
        for s in word.symbols:
            d *= abs(system.maps[s].ratio)
        return WordGeometry(word, d, d, image)

    lo, hi = system.domain_of(word.symbols[-1])
    edges = np.linspace(lo, hi, grid + 1)
    i_lo, i_hi = edges[:-1].copy(), edges[1:].copy()
    d_lo = np.ones(grid)
    d_hi = np.ones(grid)
    for s in reversed(word.symbols):
        mp = system.maps[s]
        flo, fhi = mp.deriv_abs_bounds(i_lo, i_hi)
        d_lo *= flo
        d_hi *= fhi
        i_lo, i_hi = mp.apply_interval(i_lo, i_hi)
    sup = float(d_hi.max()) * (1.0 + _OUTWARD)
    inf = float(d_lo.min()) * (1.0 - _OUTWARD)
    return WordGeometry(word, sup, inf, image)


# ---------------------------------------------------------------------------
# separation and truncation


@dataclass(frozen=True)
class SeparationReport:
    """Outcome of the depth-1 disjoint-interior check."""

    ok: bool
    pair: Optional[tuple[int, int]] = None
    detail: str = ""


def check_separation(system: SystemSpec) -> SeparationReport:
    """Do the depth-1 images have pairwise disjoint interiors (within each
    image vertex space)?  Returns a report naming the first offending pair."""
    by_vertex: dict[int, list[tuple[int, float, float]]] = {}
    for e, mp in enumerate(system.maps):
        lo, hi = system.domain_of(e)
        a, b = mp.apply_interval(lo, hi)
        vlo, vhi = system.vertex_spaces[mp.image_vertex]
        if a < vlo - 1e-12 or b > vhi + 1e-12:
            return SeparationReport(
                ok=False,
                pair=(e, e),
                detail=f"map {e} image [{a}, {b}] leaves its vertex space [{vlo}, {vhi}]",
            )
        by_vertex.setdefault(mp.image_vertex, []).append((e, float(a), float(b)))
    for items in by_vertex.values():
        items.sort(key=lambda t: (t[1], t[2]))
        for (e1, _, b1), (e2, a2, _) in zip(items, items[1:]):
            if a2 < b1 - 1e-12:
                return SeparationReport(
                    ok=False,
                    pair=(min(e1, e2), max(e1, e2)),
                    detail=f"images of maps {e1} and {e2} overlap ({a2} < {b1})",
                )
    return SeparationReport(ok=True)


def ensure_separation(system: SystemSpec) -> None:
    """Raise SeparationError unless check_separation passes."""
    report = check_separation(system)
    if not report.ok:
        raise SeparationError(report.detail)


def truncate(source: Union["SimilitudeFamily", SystemSpec], n: int) -> SystemSpec:
    """Sub-system on the first n maps.  n >= 2 (an IFS needs two elements)."""
    if n < 2:
        raise ValueError(f"truncation level must be >= 2, got {n}")
    if isinstance(source, SimilitudeFamily):
        return source.truncate(n)
    if n > source.alphabet_size:
        raise ValueError(
            f"cannot truncate to {n} maps, system has {source.alphabet_size}"
        )
    inc = source.incidence
    if inc is not None:
        inc = IncidenceMatrix(tuple(tuple(row[:n]) for row in inc.rows[:n]))
    sub = SystemSpec(
        flavor=source.flavor,
        vertex_spaces=source.vertex_spaces,
        maps=source.maps[:n],
        incidence=inc,
        distortion_bound=source.distortion_bound,
        word_contraction=_contraction(source.maps[:n], source.vertex_spaces),
        label=f"{source.label or 'system'}[:{n}]",
        level=n,
    )
    return sub


def _contraction(maps: Sequence[MapDescriptor], vertex_spaces) -> float:
    """gamma with sup|s_w'| <= gamma^floor(|w|/2) (word-level two-step bound);
    for pure similitudes the sharper one-step max|a| is returned."""
    if all(m.kind in ("similitude", "affine-1d") for m in maps):
        return max(abs(m.ratio) for m in maps)
    worst = 0.0
    for e, me in enumerate(maps):
        for e2, m2 in enumerate(maps):
            if me.domain_vertex != m2.image_vertex:
                continue
            lo, hi = vertex_spaces[m2.domain_vertex]
            ilo, ihi = m2.apply_interval(lo, hi)
            inner_hi = m2.deriv_abs_bounds(lo, hi)[1]
            outer_hi = me.deriv_abs_bounds(ilo, ihi)[1]
            worst = max(worst, float(inner_hi) * float(outer_hi))
    if not (0.0 < worst < 1.0):
        raise InvalidSystem(f"two-step contraction bound {worst} is not < 1")
    return worst


# ---------------------------------------------------------------------------
# named families


@dataclass(frozen=True)
class SimilitudeFamily:
    """A countable similitude family given by closed-form generators.

    ``log_mass(t)`` is the analytic log of sum_{i>=1} |a_i|^t (math.inf when
    the series diverges); it powers the exact pressure path for infinite
    systems.  ``truncate(n)`` cuts the finite sub-system on the first n maps.
    """

    name: str
    ratio_fn: Callable[[int], float] = field(compare=False)
    offset_fn: Callable[[int], float] = field(compare=False)
    log_mass: Optional[Callable[[float], float]] = field(compare=False, default=None)

    def truncate(self, n: int) -> SystemSpec:
        if n < 2:
            raise ValueError(f"truncation level must be >= 2, got {n}")
        maps = tuple(
            MapDescriptor("similitude", ratio=self.ratio_fn(i), offset=self.offset_fn(i))
            for i in range(1, n + 1)
        )
        return SystemSpec(
            flavor="cifs",
            vertex_spaces=((0.0, 1.0),),
            maps=maps,
            incidence=None,
            distortion_bound=1.0,
            word_contraction=max(abs(m.ratio) for m in maps),
            label=f"{self.name}[:{n}]",
            level=n,
        )


@functools.lru_cache(maxsize=None)
def golden_family() -> SimilitudeFamily:
    """Geometric ratios a_i = 2^-(i+1), images packed left to right with a
    gap equal to each image, so everything sits in [0, 1] with room to spare.
    The full family's Bowen root is log((1+sqrt 5)/2)/log 2."""

    def log_mass(t: float) -> float:
        # sum_{i>=1} 2^(-(i+1)t) = x^2/(1-x) with x = 2^-t, divergent at t <= 0
        if t <= 0.0:
            return math.inf
        x = 2.0 ** (-t)
        return 2.0 * math.log(x) - math.log1p(-x)

    return SimilitudeFamily(
        name="golden",
        ratio_fn=lambda i: 2.0 ** (-(i + 1)),
        offset_fn=lambda i: 1.0 - 2.0 ** (-(i - 1)),
        log_mass=log_mass,
    )


@functools.lru_cache(maxsize=None)
def borderline_family() -> SimilitudeFamily:
    """A family whose pressure never crosses zero: a_i = (c/(i log^2(i+1)))^2.

    The mass series sum a_i^t diverges for t < 1/2 and at t = 1/2 sums to
    c * sum 1/(i log^2(i+1)) < 1 by choice of c, so the pressure jumps from
    +inf straight to a negative value — there is no Bowen root.
    """
    total = _borderline_base_sum()
    c = 0.5 / total  # pressure at the finiteness threshold is log(1/2)

    def log_mass(t: float) -> float:
        if t < 0.5:
            return math.inf
        # sum_i (c / (i log^2(i+1)))^(2t), numerically with an integral tail
        s = 2.0 * t
        n = 200_000
        i = np.arange(1, n + 1, dtype=float)
        terms = (c / (i * np.log(i + 1) ** 2)) ** s
        head = float(np.sort(terms).sum())
        # tail: integral_n^inf (c/(x log^2 x))^s dx, crude upper bound
        if s > 1.0:
            tail = (c / math.log(n) ** 2) ** s * n ** (1.0 - s) / (s - 1.0)
        else:  # s == 1: integral of c/(x log^2 x) = c/log(n)
            tail = c / math.log(n)
        return math.log(head + tail)

    def offset(i: int) -> float:
        # slot for map i is [1 - 1/i, 1 - 1/(i+1)), width 1/(i(i+1));
        # the ratios decay like i^-2 / log^4 i so every image fits its slot
        return 1.0 - 1.0 / i

    return SimilitudeFamily(
        name="borderline",
        ratio_fn=lambda i: (c / (i * math.log(i + 1) ** 2)) ** 2,
        offset_fn=offset,
        log_mass=log_mass,
    )


@functools.lru_cache(maxsize=None)
def _borderline_base_sum() -> float:
    i = np.arange(1, 200_001, dtype=float)
    head = float(np.sort(1.0 / (i * np.log(i + 1) ** 2)).sum())
    return head + 1.0 / math.log(200_000.0)


def cantor_system(ratios: Sequence[float], label: str = "cantor") -> SystemSpec:
    """Similitudes with the given ratios, images equally spaced across [0, 1]
    (first at 0, last ending at 1; touching allowed when the ratios tile)."""
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) < 2:
        raise InvalidSystem("need at least two ratios")
    if any(not (0.0 < r < 1.0) for r in ratios):
        raise InvalidSystem(f"ratios must lie in (0, 1): {ratios}")
    slack = 1.0 - sum(ratios)
    if slack < -1e-12:
        raise InvalidSystem(f"ratios sum to {sum(ratios)} > 1, images cannot fit in [0, 1]")
    gap = max(slack, 0.0) / (len(ratios) - 1)
    maps = []
    pos = 0.0
    for r in ratios:
        maps.append(MapDescriptor("similitude", ratio=r, offset=pos))
        pos += r + gap
    return SystemSpec(
        flavor="cifs",
        vertex_spaces=((0.0, 1.0),),
        maps=tuple(maps),
        incidence=None,
        distortion_bound=1.0,
        word_contraction=max(ratios),
        label=label,
    )


def continued_fraction_system(n: int) -> SystemSpec:
    """The first n continued-fraction branches x -> 1/(q+x), q = 1..n.

    One-step distortion is (1+1/q)^2 <= 4; the digit-1 branch has
    |derivative| 1 at x = 0, so contraction is tracked at word level.
    """
    if n < 2:
        raise ValueError(f"need at least two digits, got {n}")
    maps = tuple(MapDescriptor("moebius-1d", q=q) for q in range(1, n + 1))
    vs = ((0.0, 1.0),)
    return SystemSpec(
        flavor="cifs",
        vertex_spaces=vs,
        maps=maps,
        incidence=None,
        distortion_bound=4.0,
        word_contraction=_contraction(maps, vs),
        label=f"continued-fraction[:{n}]",
        level=n,
    )


def gdms_system(
    vertex_spaces: Sequence[tuple[float, float]],
    maps: Sequence[MapDescriptor],
    incidence: Optional[Sequence[Sequence[int]]] = None,
    label: str = "gdms",
) -> SystemSpec:
    """Graph-directed system.  With incidence=None the matrix is derived
    from the vertex structure: e may follow ... e' exactly when map e starts
    where map e' lands."""
    maps = tuple(maps)
    vs = tuple((float(a), float(b)) for a, b in vertex_spaces)
    if incidence is None:
        rows = tuple(
            tuple(1 if maps[e].domain_vertex == maps[e2].image_vertex else 0
                  for e2 in range(len(maps)))
            for e in range(len(maps))
        )
        inc = IncidenceMatrix(rows)
    else:
        inc = IncidenceMatrix(tuple(tuple(int(v) for v in row) for row in incidence))
    kinds = {m.kind for m in maps}
    K = 1.0 if kinds <= {"similitude", "affine-1d"} else 4.0
    return SystemSpec(
        flavor="gdms",
        vertex_spaces=vs,
        maps=maps,
        incidence=inc,
        distortion_bound=K,
        word_contraction=_contraction(maps, vs),
        label=label,
    )
