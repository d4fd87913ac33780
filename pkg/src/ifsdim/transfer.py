"""Finite-rank transfer operators and their Gibbs data.

The operator acts on functions that are constant on depth-``k`` cylinders.
A state is an admissible depth-``k`` word ``w``; prepending a symbol ``e``
gives the refinement step, and the weight attached to the prepended word is
``exp(t * m)`` where ``m`` is the midpoint of the log-derivative bracket of
map ``e`` over the exact image interval of the context ``w[:k-1]`` (the
whole domain of ``e`` when ``k == 1``).  Power iteration on the transpose
produces the eigenmeasure, the right eigenvector gives the density, and
their product is the invariant (shift-stationary) measure, realised here as
a stationary Markov chain on the states.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .pressure import BowenSolution, ConvergenceFailure, _bisect
from .symbolic import Word, enumerate_admissible, finitely_primitive_witness
from .systems import SystemSpec, word_image

__all__ = [
    "DegenerateSystemError",
    "GibbsState",
    "OperatorMatrix",
    "PotentialSpec",
    "ReducibilityError",
    "build_operator",
    "eigenmeasure",
    "entropy_lyapunov",
    "EntropyLyapunov",
    "operator_bowen_solve",
]


class ReducibilityError(ValueError):
    """The incidence structure has no finite primitivity witness."""


class DegenerateSystemError(RuntimeError):
    """The invariant measure has a non-positive contraction rate."""


@dataclass(frozen=True)
class PotentialSpec:
    """Geometric potential ``f = exponent * log|derivative|``.

    ``holder_alpha`` is the Hoelder exponent used for the variation decay
    estimate; geometric potentials of one-dimensional systems with bounded
    distortion are Lipschitz in the symbolic metric, hence the default 1.
    """

    exponent: float
    holder_alpha: float = 1.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.exponent):
            raise ValueError(f"exponent must be finite, got {self.exponent}")
        if not (self.holder_alpha > 0):
            raise ValueError(f"holder_alpha must be > 0, got {self.holder_alpha}")

    def summability_bound(self, system: SystemSpec) -> float:
        """sum_e sup |s_e'|^exponent over the alphabet (finite here)."""
        total = 0.0
        for e in range(system.alphabet_size):
            lo, hi = system.domain_of(e)
            _, sup = system.maps[e].deriv_abs_bounds(lo, hi)
            total += float(sup) ** self.exponent
        return total


@dataclass(frozen=True)
class OperatorMatrix:
    """Matrix of the transfer operator on depth-``depth`` cylinder functions.

    ``matrix[i, j]`` is the weight carried from state ``j`` into state ``i``:
    it is nonzero exactly when prepending ``words[j][0]`` to ``words[i]``
    reproduces ``words[j]`` up to depth (i.e. ``words[j][1:] == words[i][:-1]``
    and the junction is admissible).  ``state_log_mid[j]`` is the midpoint of
    the log-derivative bracket of the first symbol of state ``j`` over the
    image of its context; ``variation_bound`` is the largest bracket width
    times ``|exponent|`` — the resolution of this finite-rank truncation.
    """

    system: SystemSpec = field(repr=False)
    potential: PotentialSpec
    depth: int
    words: tuple[Word, ...] = field(repr=False)
    matrix: np.ndarray = field(repr=False)
    state_log_mid: np.ndarray = field(repr=False)
    variation_bound: float

    def __len__(self) -> int:
        return len(self.words)

    def spectral_radius_estimate(self) -> float:
        """Crude bracket-free estimate: max row sum (an upper bound)."""
        return float(self.matrix.sum(axis=1).max())


def build_operator(
    system: SystemSpec, potential: PotentialSpec, depth: int = 2
) -> OperatorMatrix:
    """Assemble the finite transfer matrix on admissible depth-``depth`` words.

    Raises :class:`ReducibilityError` when the incidence matrix admits no
    finite primitivity witness (power iteration would not converge to a
    simple positive eigenpair), and ``ValueError`` when no admissible word
    of the requested depth exists.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    incidence = system.incidence
    if incidence is not None and finitely_primitive_witness(incidence) is None:
        raise ReducibilityError(
            "incidence matrix is not finitely primitive; the transfer "
            "operator has no unique positive eigenpair"
        )

    words = tuple(
        enumerate_admissible(system.incidence_or_full(), system.alphabet_size, depth)
    )
    if not words:
        raise ValueError(f"no admissible words of depth {depth}")
    index = {w.symbols: i for i, w in enumerate(words)}
    n = len(words)

    t = potential.exponent
    log_mid = np.empty(n)
    log_gap = np.empty(n)
    for j, w in enumerate(words):
        first = w.symbols[0]
        context = w.symbols[1:]
        if context:
            lo, hi = word_image(system, Word(context))
        else:
            lo, hi = system.domain_of(first)
        dmin, dmax = system.maps[first].deriv_abs_bounds(lo, hi)
        lo_log, hi_log = math.log(float(dmin)), math.log(float(dmax))
        log_mid[j] = 0.5 * (lo_log + hi_log)
        log_gap[j] = hi_log - lo_log

    weights = np.exp(t * log_mid)
    allows = system.incidence_or_full().allows
    matrix = np.zeros((n, n))
    for j, w in enumerate(words):
        # states reachable from j under the shift: drop the first symbol of
        # the prepended word, i.e. rows i with words[i][:-1] == w[1:].
        last = w.symbols[-1]
        body = w.symbols[1:]
        for e in range(system.alphabet_size):
            if not allows(last, e):
                continue
            row = index.get(body + (e,))
            if row is not None:
                matrix[row, j] = weights[j]

    return OperatorMatrix(
        system=system,
        potential=potential,
        depth=depth,
        words=words,
        matrix=matrix,
        state_log_mid=log_mid,
        variation_bound=abs(t) * float(log_gap.max()),
    )


@dataclass(frozen=True, eq=False)
class GibbsState:
    """Eigen-data of one finite transfer matrix.

    ``eigenmeasure`` is the left (transpose) eigenvector normalised to total
    mass one — the conformal-measure analogue on depth-``depth`` cylinders.
    ``density`` is the right eigenvector scaled so that
    ``sum(eigenmeasure * density) == 1``; ``invariant`` is their product,
    the stationary law of the Markov chain with matrix ``transition`` whose
    move from state ``w`` prepends one admissible symbol.
    """

    operator: OperatorMatrix = field(repr=False)
    eigenvalue: float
    eigenmeasure: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)
    invariant: np.ndarray = field(repr=False)
    transition: np.ndarray = field(repr=False)
    residual: float
    density_residual: float
    iterations: int

    @property
    def words(self) -> tuple[Word, ...]:
        return self.operator.words

    @property
    def log_eigenvalue(self) -> float:
        return math.log(self.eigenvalue)

    def shift_invariance_defect(self) -> float:
        """max over depth-(k-1) words of |head marginal - tail marginal|."""
        if self.operator.depth == 1:
            return 0.0
        head: dict[tuple[int, ...], float] = {}
        tail: dict[tuple[int, ...], float] = {}
        for w, mass in zip(self.words, self.invariant):
            head[w.symbols[:-1]] = head.get(w.symbols[:-1], 0.0) + float(mass)
            tail[w.symbols[1:]] = tail.get(w.symbols[1:], 0.0) + float(mass)
        keys = set(head) | set(tail)
        return max(abs(head.get(k, 0.0) - tail.get(k, 0.0)) for k in keys)

    def json_dict(self) -> dict:
        return {
            "eigenvalue": self.eigenvalue,
            "depth": self.operator.depth,
            "exponent": self.operator.potential.exponent,
            "masses": {
                ".".join(map(str, w.symbols)): float(m)
                for w, m in zip(self.words, self.eigenmeasure)
            },
            "invariant_masses": {
                ".".join(map(str, w.symbols)): float(m)
                for w, m in zip(self.words, self.invariant)
            },
            "residuals": {
                "eigenmeasure": self.residual,
                "density": self.density_residual,
            },
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.json_dict(), indent=indent, sort_keys=True)


def _power_iterate(
    matrix: np.ndarray, tol: float, max_iters: int
) -> tuple[np.ndarray, float, float, int]:
    """Power iteration from the uniform vector; returns (vec, eig, residual, its)."""
    n = matrix.shape[0]
    vec = np.full(n, 1.0 / n)
    eig = float("nan")
    for it in range(1, max_iters + 1):
        nxt = matrix @ vec
        total = float(nxt.sum())
        if total <= 0 or not math.isfinite(total):
            raise ConvergenceFailure(
                f"power iteration produced a non-positive image (sum={total}) "
                f"at iteration {it}"
            )
        eig = total / float(vec.sum())
        nxt /= total
        drift = float(np.abs(nxt - vec).max())
        vec = nxt
        if drift <= tol:
            residual = float(np.abs(matrix @ vec - eig * vec).max())
            return vec, eig, residual, it
    residual = float(np.abs(matrix @ vec - eig * vec).max())
    raise ConvergenceFailure(
        f"power iteration did not settle within {max_iters} iterations "
        f"(last residual {residual:.3e})"
    )


def eigenmeasure(
    operator: OperatorMatrix, tol: float = 1e-13, max_iters: int = 5000
) -> GibbsState:
    """Extract the positive eigenpair and the induced stationary chain.

    The transpose iteration yields the eigenmeasure (total mass one) and the
    forward iteration the density; both residuals — ``max |Mv - eig v|`` —
    must come out below 1e-8 or a :class:`ConvergenceFailure` is raised.
    """
    mat = operator.matrix
    mu, lam, res_mu, it_mu = _power_iterate(mat.T, tol, max_iters)
    g, lam_g, res_g, it_g = _power_iterate(mat, tol, max_iters)
    worst = max(res_mu, res_g)
    if worst > 1e-8:
        raise ConvergenceFailure(
            f"eigenpair residual {worst:.3e} exceeds 1e-8 "
            f"(eigenvalues {lam:.12g} / {lam_g:.12g})"
        )

    # normalise the density against the eigenmeasure so the product is a
    # probability vector.
    scale = float(np.dot(mu, g))
    g = g / scale
    invariant = mu * g

    with np.errstate(divide="ignore", invalid="ignore"):
        transition = (mat * g[None, :]) / (lam * g[:, None])
    transition = np.where(mat > 0, transition, 0.0)
    rows = transition.sum(axis=1)
    transition /= rows[:, None]

    return GibbsState(
        operator=operator,
        eigenvalue=lam,
        eigenmeasure=mu,
        density=g,
        invariant=invariant,
        transition=transition,
        residual=res_mu,
        density_residual=res_g,
        iterations=max(it_mu, it_g),
    )


@dataclass(frozen=True)
class EntropyLyapunov:
    """Entropy, Lyapunov exponent, and their ratio for one Gibbs state."""

    entropy: float
    lyapunov: float

    @property
    def ratio(self) -> float:
        return self.entropy / self.lyapunov


def entropy_lyapunov(state: GibbsState) -> EntropyLyapunov:
    """Markov-chain entropy rate and cylinder-bracket Lyapunov exponent.

    Entropy is ``-sum_w pi_w sum_v P[w, v] log P[w, v]`` over the stationary
    chain; the Lyapunov exponent integrates the (negated) first-symbol
    log-derivative midpoints against the invariant masses.  A non-positive
    exponent means the system does not contract along typical orbits and
    the dimension ratio is undefined: :class:`DegenerateSystemError`.
    """
    pi = state.invariant
    p = state.transition
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(p > 0, p * np.log(p), 0.0)
    entropy = float(-(pi[:, None] * plogp).sum())
    lyapunov = float(-(pi * state.operator.state_log_mid).sum())
    if lyapunov <= 1e-12:
        raise DegenerateSystemError(
            f"Lyapunov exponent {lyapunov:.3e} is not positive; "
            "the invariant measure sees no contraction"
        )
    return EntropyLyapunov(entropy=entropy, lyapunov=lyapunov)


def operator_bowen_solve(
    system: SystemSpec,
    depth: int = 2,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> BowenSolution:
    """Exponent where the operator's leading eigenvalue crosses one.

    Bisects ``t -> log eigenvalue(t)`` (strictly decreasing for uniformly
    contracting systems).  The returned residual is the log-eigenvalue at
    the root; the bracket is the final bisection interval.
    """

    def logeig(t: float) -> float:
        op = build_operator(system, PotentialSpec(exponent=t), depth=depth)
        state = eigenmeasure(op)
        return state.log_eigenvalue

    h, bracket, iterations = _bisect(
        logeig, tol=tol, max_iter=max_iter, label="operator eigenvalue"
    )
    residual = logeig(h)
    return BowenSolution(
        h=h,
        bracket=bracket,
        residual=residual,
        regular=True,
        depth=depth,
        iterations=iterations,
        method="operator",
    )
