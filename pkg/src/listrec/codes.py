"""Linear codes given by an n x k generator matrix.

The code is {G v : v in F^k}; the i-th symbol of a codeword is the inner
product of the i-th row of G with the message v.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import DimensionMismatch, EnumerationTooLarge, InvalidRate
from .fqla import as_array, matmul, rank, row_reduce, span_contains
from .galois import GF

CODEWORD_CAP = 1 << 20


@dataclass(frozen=True, eq=False)
class LinearCode:
    """A linear code over `field` with generator `G` of shape (n, k)."""

    field: GF
    G: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        G = as_array(self.field, self.G, ndim=2)
        if G.shape[1] > G.shape[0]:
            raise InvalidRate(f"k={G.shape[1]} exceeds n={G.shape[0]}")
        G.flags.writeable = False
        object.__setattr__(self, "G", G)

    @property
    def n(self) -> int:
        return self.G.shape[0]

    @property
    def k(self) -> int:
        return self.G.shape[1]

    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    def dimension(self) -> int:
        """Actual dimension of the code, which may be below k."""
        return rank(self.field, self.G)

    def __eq__(self, other):
        return (
            isinstance(other, LinearCode)
            and self.field == other.field
            and np.array_equal(self.G, other.G)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class CodewordList:
    """An arbitrary list of words of F^n, such as a uniformly random code.

    Repeated words are kept; each draw counts as its own codeword and is
    labelled by its position in the list.
    """

    field: GF
    words: np.ndarray

    def __post_init__(self):
        w = as_array(self.field, self.words, ndim=2)
        w.flags.writeable = False
        object.__setattr__(self, "words", w)

    @property
    def n(self) -> int:
        return self.words.shape[1]


def sample_uniform_words(F: GF, n: int, count: int, rng: np.random.Generator) -> CodewordList:
    return CodewordList(F, rng.integers(0, F.q, size=(count, n), dtype=np.int64))


def dimension_for_rate(n: int, R) -> int:
    """k = R n, which must be an integer in [1, n]."""
    if isinstance(R, (int, Rational)):
        kf = Fraction(R) * n
        if kf.denominator != 1:
            raise InvalidRate(f"R*n = {kf} is not an integer")
        k = int(kf)
    else:
        kf = float(R) * n
        k = round(kf)
        if abs(kf - k) > 1e-9:
            raise InvalidRate(f"R*n = {kf} is not an integer")
    if not 1 <= k <= n:
        raise InvalidRate(f"k = {k} must lie in [1, {n}]")
    return k


def random_generator(F: GF, n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """n iid uniform rows of F^k.

    Entries are drawn column by column, so for a fixed generator state the
    first k columns do not depend on how many columns are requested. Codes
    sampled at different k from the same seed are therefore nested.
    """
    return rng.integers(0, F.q, size=(k, n), dtype=np.int64).T.copy()


def sample_random_linear_code(
    F: GF,
    n: int,
    R,
    rng: np.random.Generator | int,
    condition_on_full_rank: bool = False,
    max_tries: int = 10_000,
) -> LinearCode:
    """Sample a random linear code of rate R and block length n.

    Args:
        F: the field.
        n: block length.
        R: rate; R * n must be an integer.
        rng: a numpy Generator, or an int seed.
        condition_on_full_rank: resample until G has rank k.
        max_tries: resampling limit when conditioning.
    """
    k = dimension_for_rate(n, R)
    seed = None
    if not isinstance(rng, np.random.Generator):
        seed = int(rng)
        rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        G = random_generator(F, n, k, rng)
        if not condition_on_full_rank or rank(F, G) == k:
            return LinearCode(F, G, seed)
    raise RuntimeError("no full-rank generator found within max_tries")


def messages(F: GF, k: int) -> np.ndarray:
    """All of F^k in index order, first coordinate most significant."""
    idx = np.arange(F.q**k, dtype=np.int64)
    out = np.empty((idx.size, k), dtype=np.int64)
    for j in range(k):
        out[:, j] = (idx // F.q ** (k - 1 - j)) % F.q
    return out


def message_index(F: GF, v) -> int:
    i = 0
    for c in np.asarray(v).tolist():
        i = i * F.q + int(c)
    return i


def encode(C: LinearCode, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    if v.shape != (C.k,):
        raise DimensionMismatch(f"message must have length {C.k}")
    return matmul(C.field, C.G, v[:, None])[:, 0]


def enumerate_codewords(C: LinearCode, cap: int = CODEWORD_CAP, dedupe: bool = False):
    """All G v for v in F^k, in message index order.

    With dedupe=True repeated codewords (possible when rank G < k) keep only
    their first occurrence.
    """
    if C.field.q**C.k > cap:
        raise EnumerationTooLarge(f"{C.field.q}^{C.k} codewords exceed cap {cap}")
    words = matmul(C.field, messages(C.field, C.k), C.G.T)
    if dedupe:
        return distinct_codewords(C, cap)[0]
    return words


def distinct_codewords(C: LinearCode, cap: int = CODEWORD_CAP):
    """Distinct codewords and, for each, the smallest message index mapping to it."""
    words = enumerate_codewords(C, cap)
    _, first = np.unique(words, axis=0, return_index=True)
    first = np.sort(first)
    return words[first], first


def hamming_weight(y) -> int:
    return int(np.count_nonzero(np.asarray(y)))


def min_distance(C: LinearCode, cap: int = CODEWORD_CAP) -> Fraction:
    """Relative minimum distance, the least weight of G v over v != 0."""
    words = enumerate_codewords(C, cap)[1:]
    return Fraction(int(np.count_nonzero(words, axis=1).min()), C.n)


def cols(X) -> np.ndarray:
    """The columns of X as rows of the returned array."""
    return np.asarray(X).T.copy()


def contains_cols(C: LinearCode, X) -> bool:
    """Whether every column of the n x d matrix X is a codeword of C."""
    X = np.asarray(X, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != C.n:
        raise DimensionMismatch(f"X must have {C.n} rows")
    if X.shape[1] == 0:
        return True
    basis, piv = row_reduce(C.field, C.G.T)
    return bool(span_contains(C.field, basis, piv, X.T).all())
