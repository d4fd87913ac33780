import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ifsdim.symbolic import (
    IncidenceMatrix,
    Word,
    comparison_distance,
    count_admissible,
    enumerate_admissible,
    finitely_primitive_witness,
    shift,
)

FIB = IncidenceMatrix(((1, 1), (1, 0)))

words_st = st.lists(st.integers(0, 4), min_size=1, max_size=8).map(lambda s: Word(tuple(s)))


def test_word_basics():
    w = Word.of(0, 1, 2)
    assert len(w) == 3
    assert str(w) == "0.1.2"
    assert w[1] == 1
    assert w[1:] == Word.of(1, 2)
    assert w.prepend(7) == Word.of(7, 0, 1, 2)
    assert w.extend(9) == Word.of(0, 1, 2, 9)
    assert list(w) == [0, 1, 2]


def test_word_rejects_bad_input():
    with pytest.raises(ValueError):
        Word(())
    with pytest.raises(ValueError):
        Word((0, -1))


def test_word_accepts_numpy_ints():
    w = Word(tuple(np.array([1, 2], dtype=np.int64)))
    assert w == Word.of(1, 2)
    assert all(type(s) is int for s in w.symbols)


def test_shift():
    assert shift(Word.of(3, 1, 2)) == Word.of(1, 2)
    with pytest.raises(ValueError):
        shift(Word.of(3))


def test_comparison_distance_values():
    # disagreement at the first slot: e^0
    assert comparison_distance(Word.of(0, 1), Word.of(1, 1)) == 1.0
    # disagreement at slot 2: e^-1
    assert comparison_distance(Word.of(0, 1), Word.of(0, 0)) == pytest.approx(math.exp(-1))
    # one word extends the other: separated just past the common part
    assert comparison_distance(Word.of(0, 1), Word.of(0, 1, 2)) == pytest.approx(math.exp(-2))
    assert comparison_distance(Word.of(0, 1), Word.of(0, 1)) == 0.0


@given(words_st, words_st, words_st)
def test_comparison_distance_is_an_ultrametric(a, b, c):
    dab = comparison_distance(a, b)
    assert dab == comparison_distance(b, a)
    assert (dab == 0.0) == (a == b)
    assert dab <= max(comparison_distance(a, c), comparison_distance(c, b)) + 1e-15


def test_enumerate_full_shift_is_lexicographic():
    got = list(enumerate_admissible(None, 3, 2))
    assert [w.symbols for w in got] == sorted(itertools.product(range(3), repeat=2))


def test_enumerate_respects_incidence():
    got = [w.symbols for w in enumerate_admissible(FIB, 2, 4)]
    want = [
        w
        for w in itertools.product(range(2), repeat=4)
        if all(FIB.allows(a, b) for a, b in zip(w, w[1:]))
    ]
    assert got == want
    assert (1, 1, 0, 0) not in got


@pytest.mark.parametrize(
    "matrix,size",
    [
        (None, 2),
        (IncidenceMatrix.full(3), 3),
        (FIB, 2),
        (IncidenceMatrix(((0, 1, 0), (0, 0, 1), (1, 0, 0))), 3),
    ],
)
@pytest.mark.parametrize("depth", [1, 2, 3, 5])
def test_count_matches_enumeration(matrix, size, depth):
    assert count_admissible(matrix, size, depth) == len(list(enumerate_admissible(matrix, size, depth)))


def test_count_is_exact_for_huge_word_sets():
    # the object-dtype power keeps integers exact far past 2**53
    assert count_admissible(None, 10, 20) == 10**20
    assert count_admissible(IncidenceMatrix.full(10), 10, 20) == 10**20


def test_witness_full_shift():
    wit = finitely_primitive_witness(IncidenceMatrix.full(3))
    assert wit is not None
    assert wit.length == 1
    assert wit.words[(2, 1)] == Word.of(0)
    assert wit.word_set() == (Word.of(0),)


def test_witness_fibonacci():
    wit = finitely_primitive_witness(FIB)
    assert wit is not None
    assert wit.length == 1
    # every pair (e, w, e2) must chain through the incidence matrix
    for (e, e2), w in wit.words.items():
        chain = (e, *w.symbols, e2)
        assert all(FIB.allows(a, b) for a, b in zip(chain, chain[1:]))


def test_witness_identity_has_none():
    assert finitely_primitive_witness(IncidenceMatrix(((1, 0), (0, 1)))) is None


@given(
    st.integers(2, 4).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=n, max_size=n
        )
    )
)
def test_witness_words_always_chain(rows):
    matrix = IncidenceMatrix(tuple(tuple(r) for r in rows))
    wit = finitely_primitive_witness(matrix, max_length=5)
    if wit is None:
        return
    assert 1 <= wit.length <= 5
    for (e, e2), w in wit.words.items():
        assert len(w) == wit.length
        chain = (e, *w.symbols, e2)
        assert all(matrix.allows(a, b) for a, b in zip(chain, chain[1:]))
