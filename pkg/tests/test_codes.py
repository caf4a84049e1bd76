from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from listrec.codes import (
    CodewordList,
    LinearCode,
    cols,
    contains_cols,
    dimension_for_rate,
    distinct_codewords,
    encode,
    enumerate_codewords,
    message_index,
    messages,
    min_distance,
    sample_random_linear_code,
    sample_uniform_words,
)
from listrec.errors import DimensionMismatch, EnumerationTooLarge, InvalidRate
from listrec.fqla import matmul, rank
from listrec.galois import field, field_of_order


def pairwise_min_distance(words: np.ndarray) -> Fraction:
    n = words.shape[1]
    best = n
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            best = min(best, int((words[i] != words[j]).sum()))
    return Fraction(best, n)


# sampling


def test_sample_shape():
    C = sample_random_linear_code(field(2), 4, 0.5, 1)
    assert (C.n, C.k) == (4, 2)
    assert C.rate() == Fraction(1, 2)


def test_sample_reproducible():
    F = field(3)
    a = sample_random_linear_code(F, 6, Fraction(1, 3), 99)
    b = sample_random_linear_code(F, 6, Fraction(1, 3), 99)
    assert a.k == 2 and a == b
    assert a.seed == 99


def test_invalid_rates():
    with pytest.raises(InvalidRate):
        sample_random_linear_code(field(2), 2, 0.25, 0)
    with pytest.raises(InvalidRate):
        dimension_for_rate(4, 0)
    with pytest.raises(InvalidRate):
        dimension_for_rate(4, Fraction(5, 4))
    with pytest.raises(InvalidRate):
        LinearCode(field(2), np.zeros((2, 3), dtype=int))
    assert dimension_for_rate(10, 0.3) == dimension_for_rate(10, Fraction(3, 10)) == 3


def test_nested_codes_from_one_seed():
    F = field(2)
    G4 = sample_random_linear_code(F, 8, Fraction(1, 2), 5).G
    G2 = sample_random_linear_code(F, 8, Fraction(1, 4), 5).G
    assert np.array_equal(G4[:, :2], G2)


def test_full_rank_conditioning():
    F = field(2)
    for s in range(30):
        C = sample_random_linear_code(F, 4, 1, s, condition_on_full_rank=True)
        assert C.dimension() == 4


def test_generator_is_read_only():
    C = sample_random_linear_code(field(2), 4, 0.5, 1)
    with pytest.raises(ValueError):
        C.G[0, 0] = 1


# encoding and enumeration


def test_encode_examples():
    F = field(5)
    I = LinearCode(F, np.eye(3, dtype=int))
    assert encode(I, [4, 0, 2]).tolist() == [4, 0, 2]
    C = sample_random_linear_code(F, 5, Fraction(2, 5), 3)
    assert encode(C, [0, 0]).tolist() == [0] * 5
    rep = LinearCode(field(2), [[1], [1], [1]])
    assert encode(rep, [1]).tolist() == [1, 1, 1]
    with pytest.raises(DimensionMismatch):
        encode(rep, [1, 0])


def test_enumerate_examples():
    Z = LinearCode(field(2), np.zeros((3, 2), dtype=int))
    assert not enumerate_codewords(Z).any()
    assert enumerate_codewords(Z, dedupe=True).shape == (1, 3)
    assert enumerate_codewords(sample_random_linear_code(field(2), 3, Fraction(2, 3), 0)).shape == (4, 3)
    assert enumerate_codewords(sample_random_linear_code(field(3), 4, Fraction(3, 4), 0)).shape == (27, 4)
    with pytest.raises(EnumerationTooLarge):
        enumerate_codewords(LinearCode(field(2), np.eye(21, dtype=int)))


def test_messages_order():
    F = field(3)
    M = messages(F, 2)
    assert M[:4].tolist() == [[0, 0], [0, 1], [0, 2], [1, 0]]
    assert all(message_index(F, m) == i for i, m in enumerate(M))


def test_distinct_codewords_keep_first_message():
    F = field(2)
    C = LinearCode(F, [[1, 1], [1, 1], [0, 0]])
    words, first = distinct_codewords(C)
    assert first.tolist() == [0, 1]
    assert words.tolist() == [[0, 0, 0], [1, 1, 0]]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 9]), st.integers(1, 6), st.data())
def test_encode_is_linear(q, n, data):
    F = field_of_order(q)
    k = data.draw(st.integers(1, n))
    C = sample_random_linear_code(F, n, Fraction(k, n), data.draw(st.integers(0, 10**6)))
    vec = st.lists(st.integers(0, q - 1), min_size=k, max_size=k)
    u, v = np.array(data.draw(vec)), np.array(data.draw(vec))
    a = data.draw(st.integers(0, q - 1))
    lhs = encode(C, F.add(F.mul(a, u), v))
    rhs = F.add(F.mul(a, encode(C, u)), encode(C, v))
    assert np.array_equal(lhs, rhs)


# distance


def test_min_distance_examples():
    assert min_distance(LinearCode(field(2), [[1], [1], [1]])) == 1
    assert min_distance(LinearCode(field(3), np.eye(4, dtype=int))) == Fraction(1, 4)
    assert min_distance(LinearCode(field(2), [[1, 1], [1, 1]])) == 0


@pytest.mark.parametrize("seed", range(10))
def test_min_distance_random_binary(seed):
    C = sample_random_linear_code(field(2), 10, Fraction(3, 10), seed)
    words = enumerate_codewords(C)
    assert min_distance(C) == pairwise_min_distance(words)


# cols


def test_cols_examples():
    assert cols(np.eye(3, dtype=int)).tolist() == np.eye(3, dtype=int).tolist()
    assert cols([[1, 0, 2]]).tolist() == [[1], [0], [2]]
    X = np.array([[1, 0], [1, 1], [0, 1]])
    assert cols(X).tolist() == [[1, 1, 0], [0, 1, 1]]


def test_contains_cols_examples():
    F = field(3)
    C = sample_random_linear_code(F, 5, Fraction(2, 5), 8, condition_on_full_rank=True)
    assert contains_cols(C, C.G)
    assert contains_cols(C, np.zeros((5, 0), dtype=int))
    words = {tuple(w) for w in enumerate_codewords(C).tolist()}
    y = next(np.array(v) for v in np.ndindex(*(3,) * 5) if v not in words)
    assert not contains_cols(C, np.column_stack([C.G[:, 0], y]))
    with pytest.raises(DimensionMismatch):
        contains_cols(C, np.zeros((4, 1), dtype=int))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(2, 5), st.integers(0, 10**6))
def test_contains_cols_matches_enumeration(q, n, seed):
    F = field_of_order(q)
    k = 1 + seed % (n - 1)
    C = sample_random_linear_code(F, n, Fraction(k, n), seed)
    words = {tuple(w) for w in enumerate_codewords(C).tolist()}
    rng = np.random.default_rng(seed)
    # half codewords, half random words
    cw = matmul(F, C.G, rng.integers(0, q, size=(k, 3)))
    X = np.column_stack([cw, rng.integers(0, q, size=(n, 3))])
    for j in range(X.shape[1]):
        assert contains_cols(C, X[:, [j]]) == (tuple(X[:, j].tolist()) in words)


# uniform words


def test_uniform_words():
    F = field(3)
    W = sample_uniform_words(F, 4, 9, np.random.default_rng(0))
    assert isinstance(W, CodewordList)
    assert W.words.shape == (9, 4) and W.n == 4
    assert W.words.max() < 3


def test_rank_deficient_samples_are_kept():
    F = field(2)
    ranks = [sample_random_linear_code(F, 3, 1, s).dimension() for s in range(200)]
    assert min(ranks) < 3
    assert all(rank(F, sample_random_linear_code(F, 3, 1, s).G) == r for s, r in enumerate(ranks[:20]))
