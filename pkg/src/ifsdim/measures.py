"""Measures on the line, conformal cylinder measures, and convergence gauges.

Two concrete measure representations cover everything the package needs:

* ``LineMeasure``     — finitely many atoms plus finitely many constant-
                        density pieces on the real line.  Closed under the
                        exact integral, distance and sampling operations
                        below, which is why the example gallery and every
                        limit object live in this class.
* ``CylinderMeasure`` — masses on the cylinder algebra of a finite system,
                        stored per depth with exact additivity (each word's
                        mass is the sum of its extensions' masses by
                        construction).

Three convergence gauges with strictly decreasing strength:

* ``tv_distance``          — exact total-variation distance of LineMeasures
                             via the positive/negative parts of the signed
                             difference;
* ``setwise_discrepancy``  — max disagreement over a finite family of test
                             sets (intervals, point sets, or cylinder
                             words); always a lower bound for TV;
* ``weak_discrepancy``     — max disagreement of exact integrals over a
                             finite trigonometric + monomial dictionary, a
                             pragmatic stand-in for testing against every
                             bounded continuous function.

Sampling uses a counter-based generator (Philox) so draws are reproducible
from (source, seed) alone and independent of evaluation order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Optional, Union

import numpy as np

from .pressure import ConvergenceFailure
from .symbolic import Word, enumerate_admissible
from .systems import (
    MapDescriptor,
    SimilitudeFamily,
    SystemSpec,
    cantor_system,
    level_geometry,
)

__all__ = [
    "LineMeasure",
    "CylinderMeasure",
    "SampleCloud",
    "MeasureFamily",
    "GALLERY_NAMES",
    "conformal_cylinder_measure",
    "mass_distribution_sequence",
    "truncation_singularity",
    "tv_distance",
    "setwise_discrepancy",
    "weak_discrepancy",
    "sample",
    "gallery",
]

_TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# atoms + piecewise-constant densities


@dataclass(frozen=True)
class LineMeasure:
    """Nonnegative measure: point masses plus constant-density intervals.

    ``atoms`` are (location, weight) pairs; ``pieces`` are (lo, hi, density)
    triples with lo < hi.  Pieces must be interior-disjoint (touching
    endpoints are fine).  Zero-weight atoms are dropped and duplicate atom
    locations merged, so equality of the stored tuples is meaningful.
    """

    atoms: tuple[tuple[float, float], ...] = ()
    pieces: tuple[tuple[float, float, float], ...] = ()
    label: str = ""

    def __post_init__(self) -> None:
        merged: dict[float, float] = {}
        for loc, w in self.atoms:
            loc, w = float(loc), float(w)
            if w < 0 or not math.isfinite(w) or not math.isfinite(loc):
                raise ValueError(f"bad atom ({loc}, {w})")
            if w > 0:
                merged[loc] = merged.get(loc, 0.0) + w
        atoms = tuple(sorted(merged.items()))
        pieces = []
        for lo, hi, d in self.pieces:
            lo, hi, d = float(lo), float(hi), float(d)
            if not (lo < hi) or d < 0 or not math.isfinite(d):
                raise ValueError(f"bad piece ({lo}, {hi}, {d})")
            if d > 0:
                pieces.append((lo, hi, d))
        pieces.sort()
        for (_, hi, _), (lo2, _, _) in zip(pieces, pieces[1:]):
            if lo2 < hi:
                raise ValueError(f"pieces overlap near {lo2}")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "pieces", tuple(pieces))

    # -- constructors ------------------------------------------------------

    @classmethod
    def point_mass(cls, loc: float, weight: float = 1.0, label: str = "") -> "LineMeasure":
        return cls(atoms=((loc, weight),), label=label)

    @classmethod
    def uniform(cls, lo: float, hi: float, mass: float = 1.0, label: str = "") -> "LineMeasure":
        return cls(pieces=((lo, hi, mass / (hi - lo)),), label=label)

    # -- basic functionals ---------------------------------------------------

    @property
    def total(self) -> float:
        return sum(w for _, w in self.atoms) + sum(d * (hi - lo) for lo, hi, d in self.pieces)

    @property
    def support_bounds(self) -> tuple[float, float]:
        xs = [loc for loc, _ in self.atoms]
        xs += [e for lo, hi, _ in self.pieces for e in (lo, hi)]
        if not xs:
            raise ValueError("measure has no mass")
        return min(xs), max(xs)

    def mass_of_interval(self, lo: float, hi: float, closed: bool = True) -> float:
        """Mass of [lo, hi] (closed=True) or (lo, hi) (closed=False); the
        two differ only by atoms sitting exactly on the endpoints."""
        if hi < lo:
            return 0.0
        inside = (
            (lambda x: lo <= x <= hi) if closed else (lambda x: lo < x < hi)
        )
        m = sum(w for loc, w in self.atoms if inside(loc))
        for plo, phi, d in self.pieces:
            m += d * max(0.0, min(hi, phi) - max(lo, plo))
        return m

    def mass_of_points(self, points: Iterable[float]) -> float:
        """Mass of a finite point set (only atoms can contribute)."""
        wanted = set(float(p) for p in points)
        return sum(w for loc, w in self.atoms if loc in wanted)

    def cdf(self, x: float) -> float:
        m = sum(w for loc, w in self.atoms if loc <= x)
        for lo, hi, d in self.pieces:
            m += d * max(0.0, min(x, hi) - lo)
        return m

    def moment(self, p: int) -> float:
        """Exact integral of x^p."""
        if p < 0:
            raise ValueError("moment order must be >= 0")
        m = sum(w * loc**p for loc, w in self.atoms)
        for lo, hi, d in self.pieces:
            m += d * (hi ** (p + 1) - lo ** (p + 1)) / (p + 1)
        return m

    def trig_moment(self, j: int, kind: str) -> float:
        """Exact integral of cos(2*pi*j*x) or sin(2*pi*j*x)."""
        if j < 1:
            raise ValueError("frequency must be >= 1")
        w_ = _TWO_PI * j
        f = math.cos if kind == "cos" else math.sin
        m = sum(w * f(w_ * loc) for loc, w in self.atoms)
        for lo, hi, d in self.pieces:
            if kind == "cos":
                m += d * (math.sin(w_ * hi) - math.sin(w_ * lo)) / w_
            else:
                m += d * (math.cos(w_ * lo) - math.cos(w_ * hi)) / w_
        return m

    # -- serialization -------------------------------------------------------

    def json_dict(self) -> dict:
        return {
            "atoms": [[loc, w] for loc, w in self.atoms],
            "pieces": [[lo, hi, d] for lo, hi, d in self.pieces],
            "label": self.label,
        }

    def to_json(self) -> str:
        return json.dumps(self.json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "LineMeasure":
        raw = json.loads(text)
        return cls(
            atoms=tuple((a[0], a[1]) for a in raw.get("atoms", ())),
            pieces=tuple((p[0], p[1], p[2]) for p in raw.get("pieces", ())),
            label=raw.get("label", ""),
        )


# ---------------------------------------------------------------------------
# exact total variation


def tv_distance(m1: LineMeasure, m2: LineMeasure) -> float:
    """sup over Borel sets of |m1(A) - m2(A)|, computed exactly.

    The signed difference of two LineMeasures splits into an atomic part
    (weight mismatches at the union of atom locations) and a density part
    (constant on each cell of the union of the piece edges); the distance is
    the larger of the positive-part and negative-part masses, which agree
    when both inputs are probability measures.
    """
    pos = neg = 0.0
    w1 = dict(m1.atoms)
    w2 = dict(m2.atoms)
    for loc in set(w1) | set(w2):
        d = w1.get(loc, 0.0) - w2.get(loc, 0.0)
        if d > 0:
            pos += d
        else:
            neg -= d
    edges = sorted(
        {e for lo, hi, _ in m1.pieces + m2.pieces for e in (lo, hi)}
    )
    for x0, x1 in zip(edges, edges[1:]):
        d = _density_at(m1, x0, x1) - _density_at(m2, x0, x1)
        if d > 0:
            pos += d * (x1 - x0)
        else:
            neg -= d * (x1 - x0)
    return max(pos, neg)


def _density_at(m: LineMeasure, x0: float, x1: float) -> float:
    """Density of m on (x0, x1), a cell of the refined edge partition, so a
    single piece either covers it or misses it."""
    for lo, hi, d in m.pieces:
        if lo <= x0 and x1 <= hi:
            return d
    return 0.0


# ---------------------------------------------------------------------------
# setwise and weak gauges

TestSet = Union[tuple, Word]


def _set_mass(measure, spec: TestSet) -> float:
    if isinstance(spec, Word):
        if isinstance(measure, CylinderMeasure):
            return measure.mass_of(spec)
        if isinstance(measure, Mapping):
            return measure[spec]
        raise TypeError(f"{type(measure).__name__} cannot evaluate cylinder words")
    if not isinstance(measure, LineMeasure):
        raise TypeError(f"{type(measure).__name__} cannot evaluate {spec!r}")
    if len(spec) == 3 and spec[0] == "interval":
        return measure.mass_of_interval(float(spec[1]), float(spec[2]))
    if len(spec) == 2 and spec[0] == "points":
        return measure.mass_of_points(spec[1])
    if len(spec) == 2 and all(isinstance(v, (int, float)) for v in spec):
        return measure.mass_of_interval(float(spec[0]), float(spec[1]))
    raise ValueError(f"unrecognized test set {spec!r}")


def setwise_discrepancy(m1, m2, sets: Iterable[TestSet]) -> float:
    """max over the finite test family of |m1(A) - m2(A)|.

    Test sets are ("interval", lo, hi) or plain (lo, hi) pairs, ("points",
    locations), or Word objects for cylinder measures.  Always a lower bound
    for the total-variation distance.
    """
    worst = 0.0
    for spec in sets:
        worst = max(worst, abs(_set_mass(m1, spec) - _set_mass(m2, spec)))
    return worst


def weak_discrepancy(m1: LineMeasure, m2: LineMeasure, moments: int = 8) -> float:
    """max over {cos(2*pi*j*x), sin(2*pi*j*x) : j <= M} + {x^p : p <= M} of
    the exact integral difference — a dictionary proxy for weak convergence,
    reported as such (never as a true weak distance)."""
    if moments < 1:
        raise ValueError("moments must be >= 1")
    worst = 0.0
    for p in range(moments + 1):
        worst = max(worst, abs(m1.moment(p) - m2.moment(p)))
    for j in range(1, moments + 1):
        for kind in ("cos", "sin"):
            worst = max(worst, abs(m1.trig_moment(j, kind) - m2.trig_moment(j, kind)))
    return worst


# ---------------------------------------------------------------------------
# cylinder measures


@dataclass(frozen=True, eq=False)
class CylinderMeasure:
    """Masses on the admissible words of depth 1..depth, lexicographic order.

    ``masses[d-1]`` holds the depth-d cylinder masses.  Each level is the
    exact child-sum of the level below it (the deepest level is assigned
    first and parents are reduced from it), so additivity holds to float
    addition error rather than to a normalization tolerance.

    ``child_starts[d-1][i]`` is the index in level d+1 of the first
    extension of word i; extensions of a word are contiguous and in symbol
    order because the levels are lexicographic.
    """

    system: SystemSpec
    depth: int
    exponent: float
    masses: tuple[np.ndarray, ...]
    last_symbols: tuple[np.ndarray, ...]
    child_starts: tuple[np.ndarray, ...]
    normalized: bool = True

    def level(self, d: int) -> np.ndarray:
        if not 1 <= d <= self.depth:
            raise ValueError(f"stored depths are 1..{self.depth}, got {d}")
        return self.masses[d - 1]

    def words(self, d: int) -> Iterator[Word]:
        """Depth-d admissible words in the same order as level(d)."""
        if not 1 <= d <= self.depth:
            raise ValueError(f"stored depths are 1..{self.depth}, got {d}")
        return enumerate_admissible(self.system.incidence, self.system.alphabet_size, d)

    def mass_of(self, word: Word) -> float:
        if not 1 <= len(word) <= self.depth:
            raise ValueError(f"word depth {len(word)} outside stored range 1..{self.depth}")
        A = self.system.incidence_or_full()
        m = self.system.alphabet_size
        idx = word.symbols[0]
        if not 0 <= idx < m:
            raise ValueError(f"symbol {idx} outside alphabet")
        for d, e in enumerate(word.symbols[1:], start=2):
            prev = word.symbols[d - 2]
            if not A.allows(prev, e):
                raise ValueError(f"word {word} is not admissible")
            rank = sum(1 for e2 in range(e) if A.allows(prev, e2))
            idx = int(self.child_starts[d - 2][idx]) + rank
        return float(self.masses[len(word) - 1][idx])

    def consistent(self, tol: float = 1e-12) -> bool:
        """Additivity at every stored depth plus unit total when normalized."""
        for d in range(1, self.depth):
            parents = self.masses[d - 1]
            sums = np.add.reduceat(self.masses[d], self.child_starts[d - 1][:-1])
            if not np.allclose(parents, sums, rtol=0.0, atol=tol):
                return False
        if self.normalized and abs(float(self.masses[0].sum()) - 1.0) > tol * 10:
            return False
        return bool(all((lvl >= 0).all() for lvl in self.masses))


def _extension_tables(system: SystemSpec, depth: int):
    """last_symbols and child_starts arrays for levels 1..depth."""
    A = system.incidence_or_full()
    m = system.alphabet_size
    allowed = [np.array([e for e in range(m) if A.allows(s, e)], dtype=np.int64) for s in range(m)]
    counts = np.array([len(a) for a in allowed], dtype=np.int64)
    last = [np.arange(m, dtype=np.int64)]
    starts = []
    for _ in range(2, depth + 1):
        prev = last[-1]
        starts.append(np.concatenate(([0], np.cumsum(counts[prev]))))
        last.append(np.concatenate([allowed[s] for s in prev]) if len(prev) else prev)
    return last, starts, allowed, counts


def conformal_cylinder_measure(system: SystemSpec, h: float, depth: int) -> CylinderMeasure:
    """Cylinder masses proportional to (certified derivative sup)^h.

    The deepest level is normalized to total mass one and every shallower
    level is the exact sum of its extensions.  For similitude systems with h
    the Bowen root this reproduces the conformal masses exactly; for
    distortion-bounded systems each mass carries a relative error of at most
    (distortion bound)^h - 1.
    """
    if not 0.0 <= h <= 1.0:
        raise ValueError(f"exponent must lie in [0, 1], got {h}")
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    last, starts, _, counts = _extension_tables(system, depth)
    if (counts == 0).any():
        raise ValueError("system has a dead-end symbol; cylinder masses cannot be extended")
    lg = level_geometry(system, depth)
    if lg.count == 0:
        raise ValueError(f"no admissible words at depth {depth}")
    deepest = np.exp(h * lg.log_sup)
    deepest /= deepest.sum()
    levels = [deepest]
    for d in range(depth - 1, 0, -1):
        levels.append(np.add.reduceat(levels[-1], starts[d - 1][:-1]))
    levels.reverse()
    return CylinderMeasure(
        system=system,
        depth=depth,
        exponent=float(h),
        masses=tuple(levels),
        last_symbols=tuple(last),
        child_starts=tuple(starts),
        normalized=True,
    )


def mass_distribution_sequence(system: SystemSpec, h: float, n: int) -> LineMeasure:
    """Spread each depth-n cylinder's conformal mass uniformly over its image
    interval.  Only similitude systems qualify: their image lengths are exact
    and their pieces stay interior-disjoint under the separation the system
    was built with."""
    if not system.is_similitude():
        raise ValueError("mass distributions are only defined for similitude systems")
    if n < 1:
        raise ValueError(f"stage must be >= 1, got {n}")
    lg = level_geometry(system, n)
    weights = np.exp(h * lg.log_sup)
    weights /= weights.sum()
    lengths = lg.image_hi - lg.image_lo
    pieces = tuple(
        (float(lo), float(hi), float(w / ln))
        for lo, hi, w, ln in zip(lg.image_lo, lg.image_hi, weights, lengths)
    )
    return LineMeasure(pieces=pieces, label=f"mass-stage[{system.label or 'system'}:{n}]")


def truncation_singularity(
    family: SimilitudeFamily, n1: int, n2: int, h_n2: float, depth: int
) -> float:
    """Mass the level-n2 conformal measure leaves on words using only the
    first n1 symbols for `depth` steps: (sum_{i<=n1} a_i^{h_n2})^depth.

    Decays geometrically in depth whenever n1 < n2, which is the engine
    behind total-variation non-convergence of the truncation measures; the
    caller turns it into the TV lower bound 1 - (returned value)."""
    if not 1 <= n1 <= n2:
        raise ValueError(f"need 1 <= n1 <= n2, got {n1}, {n2}")
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    q = sum(abs(family.ratio_fn(i)) ** h_n2 for i in range(1, n1 + 1))
    return q**depth


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True, eq=False)
class SampleCloud:
    """Reproducible draws: regenerating with the same source and seed gives
    the identical point list."""

    points: np.ndarray
    seed: int
    source: str

    def __len__(self) -> int:
        return len(self.points)

    def as_text(self) -> str:
        return "".join(f"{p:.17g}\n" for p in self.points)

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.as_text())


def sample(measure, count: int, seed: int) -> SampleCloud:
    """i.i.d. draws from a normalized measure, deterministic given seed.

    LineMeasure: inverse-CDF over the location-sorted atoms and pieces.
    CylinderMeasure: the stored levels fix the first digits exactly; beyond
    the stored depth the word grows by the one-step conditional law of the
    deepest two levels (exact for product-structure conformal masses,
    first-order otherwise) until the word's image interval is shorter than
    1e-9, and the midpoint is emitted.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    rng = np.random.Generator(np.random.Philox(int(seed)))
    if isinstance(measure, LineMeasure):
        pts = _sample_line(measure, count, rng)
        source = measure.label or "line-measure"
    elif isinstance(measure, CylinderMeasure):
        pts = _sample_cylinders(measure, count, rng)
        source = (
            f"conformal[{measure.system.label or 'system'}"
            f":h={measure.exponent:.12g}:depth={measure.depth}]"
        )
    else:
        raise TypeError(f"cannot sample from {type(measure).__name__}")
    return SampleCloud(points=pts, seed=int(seed), source=source)


def _sample_line(measure: LineMeasure, count: int, rng) -> np.ndarray:
    total = measure.total
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"sampling needs a probability measure, total mass is {total}")
    comp = sorted(
        [(loc, loc, w) for loc, w in measure.atoms]
        + [(lo, hi, d * (hi - lo)) for lo, hi, d in measure.pieces]
    )
    if not comp:
        raise ValueError("measure has no mass")
    lo = np.array([c[0] for c in comp])
    hi = np.array([c[1] for c in comp])
    w = np.array([c[2] for c in comp])
    cum = np.cumsum(w)
    target = rng.random(count) * cum[-1]
    idx = np.searchsorted(cum, target, side="right")
    idx = np.minimum(idx, len(w) - 1)
    frac = (target - (cum[idx] - w[idx])) / w[idx]
    return lo[idx] + frac * (hi[idx] - lo[idx])


def _map_matrix(mp: MapDescriptor) -> tuple[float, float, float, float]:
    """(a, b, c, d) with the branch acting as x -> (a x + b)/(c x + d)."""
    if mp.kind == "moebius-1d":
        return 0.0, 1.0, 1.0, float(mp.q)
    return float(mp.ratio), float(mp.offset), 0.0, 1.0


def _sample_cylinders(measure: CylinderMeasure, count: int, rng) -> np.ndarray:
    sys_ = measure.system
    m = sys_.alphabet_size
    mats = np.array([_map_matrix(mp) for mp in sys_.maps])  # m x 4

    A = np.ones(count)
    B = np.zeros(count)
    C = np.zeros(count)
    D = np.ones(count)

    def push(digits: np.ndarray) -> None:
        nonlocal A, B, C, D
        a, b, c, d = (mats[digits, k] for k in range(4))
        A, B, C, D = A * a + B * c, A * b + B * d, C * a + D * c, C * b + D * d
        scale = np.maximum.reduce([np.abs(A), np.abs(B), np.abs(C), np.abs(D)])
        A, B, C, D = A / scale, B / scale, C / scale, D / scale

    # exact joint draw of the stored digits, level by level
    cum1 = np.cumsum(measure.masses[0])
    idx = np.searchsorted(cum1, rng.random(count) * cum1[-1], side="right")
    idx = np.minimum(idx, len(cum1) - 1)
    push(idx.astype(np.int64))
    for d in range(2, measure.depth + 1):
        cs = measure.child_starts[d - 2]
        cum = np.concatenate(([0.0], np.cumsum(measure.masses[d - 1])))
        base, top = cum[cs[idx]], cum[cs[idx + 1]]
        target = base + rng.random(count) * (top - base)
        nxt = np.searchsorted(cum, target, side="right") - 1
        idx = np.clip(nxt, cs[idx], cs[idx + 1] - 1)
        push(measure.last_symbols[d - 1][idx])

    # one-step conditional extension beyond the stored depth
    if measure.depth >= 2:
        P = np.zeros((m, m))
        cs0 = measure.child_starts[0]
        for e in range(m):
            block = measure.masses[1][cs0[e] : cs0[e + 1]]
            P[e, measure.last_symbols[1][cs0[e] : cs0[e + 1]]] = block / measure.masses[0][e]
    else:
        P = np.tile(measure.masses[0] / measure.masses[0].sum(), (m, 1))
    rowcum = np.cumsum(P, axis=1)
    cur = measure.last_symbols[measure.depth - 1][idx]
    for _ in range(500):
        x0 = B / D
        x1 = (A + B) / (C + D)
        if float(np.abs(x1 - x0).max()) < 1e-9:
            return 0.5 * (x0 + x1)
        u = rng.random(count)
        nxt = (u[:, None] > rowcum[cur]).sum(axis=1)
        nxt = np.minimum(nxt, m - 1)
        for _bump in range(m):  # never settle on a forbidden transition
            bad = P[cur, nxt] == 0.0
            if not bad.any():
                break
            nxt[bad] = np.maximum(nxt[bad] - 1, 0)
        push(nxt)
        cur = nxt
    raise ConvergenceFailure("cylinder images failed to contract below 1e-9")


# ---------------------------------------------------------------------------
# the example gallery


@dataclass(frozen=True)
class MeasureFamily:
    """A named sequence n -> LineMeasure together with its limit, when the
    limit is itself expressible as a LineMeasure (else None, see note)."""

    name: str
    member: Callable[[int], "LineMeasure"] = field(repr=False)
    limit: Optional[LineMeasure] = None
    note: str = ""

    def at(self, n: int) -> LineMeasure:
        if n < 1:
            raise ValueError(f"family index must be >= 1, got {n}")
        return self.member(n)

    def sequence(self, upto: int) -> list[LineMeasure]:
        return [self.at(n) for n in range(1, upto + 1)]


def _alternating_collapse(n: int) -> LineMeasure:
    label = f"alternating-collapse[{n}]"
    if n % 2 == 1:
        return LineMeasure(pieces=((0.0, 1.0 / n, float(n)),), label=label)
    return LineMeasure(atoms=((1.0 / n, 1.0),), label=label)


def _lattice_comb(n: int) -> LineMeasure:
    return LineMeasure(
        atoms=tuple((i / n, 1.0 / n) for i in range(1, n + 1)),
        label=f"lattice-comb[{n}]",
    )


def _atom_vs_uniform(n: int) -> LineMeasure:
    pieces = ((1.0 / n, 1.0, 1.0),) if n > 1 else ()
    return LineMeasure(atoms=((0.0, 1.0 / n),), pieces=pieces, label=f"atom-vs-uniform[{n}]")


def _leaking_block(n: int) -> LineMeasure:
    return LineMeasure(
        atoms=(((0.0, (n - 1.0) / n),) if n > 1 else ()),
        pieces=((1.0, 2.0, 1.0 / n),),
        label=f"leaking-block[{n}]",
    )


def _staircase_edges(a: float, count: int) -> np.ndarray:
    return a ** (np.arange(count, dtype=float) ** 2)


def _staircase(n: int, a: float) -> LineMeasure:
    edges = _staircase_edges(a, n + 2)  # edges[i] = a^(i^2), i = 0..n+1
    if edges[-1] == 0.0:
        raise ValueError(f"stage {n} underflows for scale {a}; reduce the stage")
    masses = (1.0 - a) * a ** np.arange(n + 1) / (1.0 - a ** (n + 1))
    pieces = tuple(
        (float(edges[i + 1]), float(edges[i]), float(masses[i] / (edges[i] - edges[i + 1])))
        for i in range(n + 1)
    )
    return LineMeasure(pieces=pieces, label=f"staircase[a={a:g}:{n}]")


def _staircase_limit(a: float) -> LineMeasure:
    count = 1
    while a ** ((count + 1) ** 2) > 0.0:
        count += 1
    edges = _staircase_edges(a, count + 1)
    masses = (1.0 - a) * a ** np.arange(count)
    pieces = tuple(
        (float(edges[i + 1]), float(edges[i]), float(masses[i] / (edges[i] - edges[i + 1])))
        for i in range(count)
    )
    # the tail below float resolution is carried by an atom at the origin
    return LineMeasure(atoms=((0.0, float(a**count)),), pieces=pieces, label=f"staircase[a={a:g}:limit]")


def _cantor_stage_builder() -> Callable[[int], LineMeasure]:
    sys_ = cantor_system((1 / 3, 1 / 3))
    h = math.log(2.0) / math.log(3.0)

    def member(n: int) -> LineMeasure:
        stage = mass_distribution_sequence(sys_, h, n)
        return LineMeasure(pieces=stage.pieces, label=f"cantor-mass-stages[{n}]")

    return member


GALLERY_NAMES = (
    "alternating-collapse",
    "cantor-mass-stages",
    "lattice-comb",
    "atom-vs-uniform",
    "leaking-block",
    "staircase",
)


def gallery(name: str, a: float = 0.5) -> MeasureFamily:
    """Named measure sequences with known convergence behavior.

    alternating-collapse — thin uniform blocks for odd n, a drifting atom
        for even n; converges weakly to the origin atom and in no stronger
        sense.
    cantor-mass-stages   — middle-thirds mass distributions; the limit is
        the Cantor conformal measure, which is not piecewise constant, so
        limit=None here.
    lattice-comb         — n equally spaced atoms; weakly Lebesgue, setwise
        not at all (any lattice point set keeps discrepancy 1).
    atom-vs-uniform      — a shrinking atom at the origin next to a growing
        uniform block; converges in TV to Lebesgue at speed 1/n.
    leaking-block        — almost all mass parks at the origin while 1/n
        leaks onto [1, 2]; TV distance to the origin atom is exactly 1/n.
    staircase            — geometric masses on super-geometrically shrinking
        intervals (scale parameter a); the flat-density showcase.
    """
    if name == "alternating-collapse":
        return MeasureFamily(
            name,
            _alternating_collapse,
            limit=LineMeasure.point_mass(0.0, label="origin-atom"),
            note="weak limit only; TV distance to the limit stays 1",
        )
    if name == "cantor-mass-stages":
        return MeasureFamily(
            name,
            _cantor_stage_builder(),
            limit=None,
            note=(
                "contraction ratios pinned to (1/3, 1/3); the limit is the "
                "Cantor conformal measure and has no atoms-plus-pieces form"
            ),
        )
    if name == "lattice-comb":
        return MeasureFamily(
            name,
            _lattice_comb,
            limit=LineMeasure.uniform(0.0, 1.0, label="lebesgue-unit"),
            note="weak limit only; every grid point set witnesses setwise failure",
        )
    if name == "atom-vs-uniform":
        return MeasureFamily(
            name,
            _atom_vs_uniform,
            limit=LineMeasure.uniform(0.0, 1.0, label="lebesgue-unit"),
            note="TV-converges at exactly 1/n",
        )
    if name == "leaking-block":
        return MeasureFamily(
            name,
            _leaking_block,
            limit=LineMeasure.point_mass(0.0, label="origin-atom"),
            note="setwise-converges; TV distance to the limit is exactly 1/n",
        )
    if name == "staircase":
        if not 0.0 < a < 1.0:
            raise ValueError(f"scale must lie in (0, 1), got {a}")
        return MeasureFamily(
            name,
            lambda n: _staircase(n, a),
            limit=_staircase_limit(a),
            note="TV-converges geometrically; pointwise density exponents stay flat",
        )
    raise ValueError(f"unknown gallery family {name!r}; known: {', '.join(GALLERY_NAMES)}")
