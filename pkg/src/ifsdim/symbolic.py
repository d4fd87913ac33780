"""Finite words over an edge alphabet, incidence matrices, and the
comparison metric used on the coding space.

Symbols are 0-based integers indexing the maps of a system.  A word is an
admissible string of symbols; admissibility is governed by an incidence
matrix whose (i, j) entry says whether symbol j may follow symbol i.  When
no matrix is given the shift is full and every string is admissible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

__all__ = [
    "Word",
    "IncidenceMatrix",
    "PrimitivityWitness",
    "enumerate_admissible",
    "count_admissible",
    "shift",
    "comparison_distance",
    "finitely_primitive_witness",
]


@dataclass(frozen=True)
class Word:
    """An admissible finite string of symbols (0-based map indices)."""

    symbols: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.symbols) == 0:
            raise ValueError("a word needs at least one symbol")
        if any((not isinstance(s, (int, np.integer))) or s < 0 for s in self.symbols):
            raise ValueError(f"symbols must be non-negative integers: {self.symbols!r}")
        # normalize numpy ints so Words hash/compare consistently
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))

    @classmethod
    def of(cls, *symbols: int) -> "Word":
        return cls(tuple(symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, ix):
        got = self.symbols[ix]
        return Word(got) if isinstance(ix, slice) else got

    def prepend(self, symbol: int) -> "Word":
        return Word((symbol,) + self.symbols)

    def extend(self, symbol: int) -> "Word":
        return Word(self.symbols + (symbol,))

    def __str__(self) -> str:
        return ".".join(str(s) for s in self.symbols)


def shift(word: Word) -> Word:
    """Drop the first symbol.  Shifting a length-1 word is an error."""
    if len(word) <= 1:
        raise ValueError("cannot shift a length-1 word (result would be empty)")
    return Word(word.symbols[1:])


@dataclass(frozen=True)
class IncidenceMatrix:
    """0/1 transition matrix over the symbol alphabet.

    rows[i][j] == 1 means symbol j may follow symbol i.
    """

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.rows)
        if n == 0:
            raise ValueError("incidence matrix must be non-empty")
        clean = []
        for row in self.rows:
            if len(row) != n:
                raise ValueError("incidence matrix must be square")
            if any(v not in (0, 1) for v in row):
                raise ValueError("incidence entries must be 0 or 1")
            clean.append(tuple(int(v) for v in row))
        object.__setattr__(self, "rows", tuple(clean))

    @classmethod
    def full(cls, size: int) -> "IncidenceMatrix":
        return cls(tuple(tuple(1 for _ in range(size)) for _ in range(size)))

    @property
    def size(self) -> int:
        return len(self.rows)

    def allows(self, i: int, j: int) -> bool:
        return self.rows[i][j] == 1

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    def is_full(self) -> bool:
        return all(all(v == 1 for v in row) for row in self.rows)

    def boolean_power(self, p: int) -> np.ndarray:
        """Entrywise truth of 'a length-p path exists' (p >= 0; p=0 is identity)."""
        n = self.size
        acc = np.eye(n, dtype=bool)
        step = self.as_array().astype(bool)
        for _ in range(p):
            acc = (acc.astype(np.int64) @ step.astype(np.int64)) > 0
        return acc


def enumerate_admissible(
    matrix: Optional[IncidenceMatrix],
    alphabet_size: int,
    depth: int,
) -> Iterator[Word]:
    """Yield all admissible words of the given depth in lexicographic order.

    The stream is lazy: callers can consume a prefix without paying for the
    whole level.  With matrix=None the shift is full.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if alphabet_size < 1:
        raise ValueError(f"alphabet_size must be >= 1, got {alphabet_size}")
    if matrix is not None and matrix.size != alphabet_size:
        raise ValueError(
            f"matrix size {matrix.size} does not match alphabet size {alphabet_size}"
        )

    rows = None if matrix is None else matrix.rows

    def walk(prefix: tuple[int, ...]) -> Iterator[Word]:
        if len(prefix) == depth:
            yield Word(prefix)
            return
        last = prefix[-1] if prefix else None
        for s in range(alphabet_size):
            if last is not None and rows is not None and rows[last][s] == 0:
                continue
            yield from walk(prefix + (s,))

    return walk(())


def count_admissible(matrix: Optional[IncidenceMatrix], alphabet_size: int, depth: int) -> int:
    """Number of admissible depth-n words: the sum of the entries of A^(n-1)."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if matrix is None:
        return alphabet_size**depth
    acc = np.eye(matrix.size, dtype=object)
    step = np.array(matrix.rows, dtype=object)
    for _ in range(depth - 1):
        acc = acc @ step
    return int(acc.sum())


def comparison_distance(a: Word, b: Word) -> float:
    """Distance e^(1-k) from the position k of first disagreement.

    Restricted to finite words: if the words agree on their whole common
    length, the first "disagreement" is taken just past the shorter word,
    so distinct-length extensions are still separated.  Equal words of equal
    length are at distance zero.
    """
    common = min(len(a), len(b))
    for k in range(common):
        if a.symbols[k] != b.symbols[k]:
            return math.exp(1 - (k + 1))
    if len(a) == len(b):
        return 0.0
    return math.exp(1 - (common + 1))


@dataclass(frozen=True)
class PrimitivityWitness:
    """Evidence that the subshift is finitely primitive.

    ``length`` is the smallest connecting-word length p such that every
    ordered symbol pair (e, e') admits a word w of length exactly p with
    e-w-e' admissible; ``words`` holds one such w per pair (lexicographically
    smallest), keyed by (e, e').
    """

    length: int
    words: dict[tuple[int, int], Word]

    def word_set(self) -> tuple[Word, ...]:
        return tuple(sorted(set(self.words.values()), key=lambda w: w.symbols))


def finitely_primitive_witness(
    matrix: IncidenceMatrix, max_length: int = 8
) -> Optional[PrimitivityWitness]:
    """Search for the smallest single connecting length p <= max_length.

    A length p works exactly when every entry of A^(p+1) is positive.  For
    each pair the witness word is reconstructed greedily, smallest symbol
    first, so results are reproducible.  Returns None when no p in range
    works (e.g. the identity matrix, which is not primitive at all).
    """
    if max_length < 1:
        raise ValueError(f"max_length must be >= 1, got {max_length}")
    n = matrix.size
    arr = matrix.as_array().astype(bool)
    # reach[j] = boolean matrix of 'path of exactly j transitions exists'
    reach = [np.eye(n, dtype=bool)]
    for _ in range(max_length + 1):
        reach.append((reach[-1].astype(np.int64) @ arr.astype(np.int64)) > 0)

    for p in range(1, max_length + 1):
        if not reach[p + 1].all():
            continue
        words: dict[tuple[int, int], Word] = {}
        for e in range(n):
            for e2 in range(n):
                prev = e
                picked: list[int] = []
                for pos in range(p):
                    remaining = p - pos - 1  # symbols still to pick after this one
                    for cand in range(n):
                        if arr[prev][cand] and reach[remaining + 1][cand][e2]:
                            picked.append(cand)
                            prev = cand
                            break
                    else:  # pragma: no cover - reach[p+1].all() guarantees a path
                        raise RuntimeError("witness reconstruction failed")
                words[(e, e2)] = Word(tuple(picked))
        return PrimitivityWitness(length=p, words=words)
    return None
