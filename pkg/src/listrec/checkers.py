"""Exhaustive deciders for list decoding and list recovery of small codes.

Every checker enumerates centers. For list decoding a center is a word
z in F^n. For list recovery it is one list of symbols per position. For
each center the agreement of every codeword is computed, and a
per-center statistic is reduced to the worst case.

List-decoding functions take a disagreement radius rho. List-recovery
functions take an agreement threshold (alpha or eps). Use
:func:`agreement_from_radius` to convert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .codes import CODEWORD_CAP, CodewordList, LinearCode, contains_cols, distinct_codewords
from .errors import DimensionMismatch, EllExceedsField, EnumerationTooLarge
from .fqla import WitnessPair, row_reduce
from .pluralities import is_all_bad, is_average_bad
from .rational import as_fraction

CENTER_CAP = 1 << 24
BLOCK_CELLS = 1 << 22


def agreement_from_radius(rho) -> Fraction:
    return 1 - as_fraction(rho)


def dist(y, z) -> Fraction:
    y = np.asarray(y)
    z = np.asarray(z)
    if y.shape != z.shape or y.ndim != 1:
        raise DimensionMismatch(f"shapes {y.shape} and {z.shape}")
    return Fraction(int((y != z).sum()), y.shape[0])


def dist_list(z, y) -> Fraction:
    """Fraction of positions i where y[i] is not among z[0, i], ..., z[ell-1, i]."""
    z = np.atleast_2d(np.asarray(z))
    y = np.asarray(y)
    if y.ndim != 1 or z.shape[1] != y.shape[0]:
        raise DimensionMismatch(f"shapes {z.shape} and {y.shape}")
    return Fraction(int((~(z == y[None, :]).any(axis=0)).sum()), y.shape[0])


@dataclass
class Verdict:
    """Outcome of a checker.

    `statistic` is the extremal value over all centers: the largest list
    (LD, LR, ZELR), the smallest mean distance (ARLD) or the largest mean
    agreement (ARLR). It is None when fewer than L codewords exist.
    `witness` describes a violating center and the offending codewords by
    message index; it is None when the property holds.
    """

    property: str
    holds: bool
    statistic: Fraction | None
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {
            "schema": "listrec.verdict/1",
            "property": self.property,
            "holds": self.holds,
            "statistic": None if self.statistic is None else str(self.statistic),
            "witness": self.witness,
        }


# center enumeration


def _lists(q: int, ell: int) -> list[tuple[int, ...]]:
    if ell > q:
        raise EllExceedsField(f"ell={ell} exceeds q={q}")
    return list(combinations(range(q), ell))


def _membership(q: int, lists) -> np.ndarray:
    mem = np.zeros((len(lists), q), dtype=np.int16)
    for i, s in enumerate(lists):
        mem[i, list(s)] = 1
    return mem


class _Scan:
    """Agreement counts of every codeword with every center, in blocks.

    Centers are tuples (s_0, ..., s_{n-1}) of list indices, ordered
    lexicographically. The trailing positions are tabulated once; the
    leading ones are walked in Python and added on.
    """

    def __init__(self, words: np.ndarray, q: int, ell: int, cap: int = CENTER_CAP):
        self.words = words
        self.n = words.shape[1]
        self.M = words.shape[0]
        self.lists = _lists(q, ell)
        S = len(self.lists)
        self.S = S
        if S**self.n > cap:
            raise EnumerationTooLarge(f"{S}^{self.n} centers exceed cap {cap}")
        mem = _membership(q, self.lists)
        self.per_pos = [mem[:, words[:, i]] for i in range(self.n)]
        j = 0
        while j < self.n and S ** (self.n - j) * max(self.M, 1) > BLOCK_CELLS:
            j += 1
        self.split = j
        inner = np.zeros((1, self.M), dtype=np.int16)
        for i in range(j, self.n):
            inner = (inner[:, None, :] + self.per_pos[i][None, :, :]).reshape(-1, self.M)
        self.inner = inner

    def blocks(self):
        """Yield (offset, table) with table[t] the agreements of center offset + t."""
        width = self.inner.shape[0]
        for b, prefix in enumerate(product(range(self.S), repeat=self.split)):
            extra = np.zeros(self.M, dtype=np.int16)
            for i, s in enumerate(prefix):
                extra = extra + self.per_pos[i][s]
            yield b * width, self.inner + extra[None, :]

    def center(self, index: int) -> list[list[int]]:
        digits = []
        for _ in range(self.n):
            digits.append(index % self.S)
            index //= self.S
        return [list(self.lists[s]) for s in reversed(digits)]

    def agreements(self, index: int) -> np.ndarray:
        cen = self.center(index)
        return np.array(
            [sum(int(self.words[m, i] in cen[i]) for i in range(self.n)) for m in range(self.M)],
            dtype=np.int64,
        )


def _words(C, cap: int):
    """Codewords to scan and their labels (message index or list position)."""
    if isinstance(C, CodewordList):
        return C.words, np.arange(C.words.shape[0])
    return distinct_codewords(C, cap)


def _scan_max(scan: _Scan, stat) -> tuple[int, int]:
    """Largest per-center statistic and the first center attaining it."""
    best, arg = None, -1
    for off, tab in scan.blocks():
        vals = stat(tab)
        i = int(np.argmax(vals))
        if best is None or vals[i] > best:
            best, arg = int(vals[i]), off + i
    return best, arg


def _count_above(t: int):
    return lambda tab: (tab > t).sum(axis=1)


def _top_sum(L: int):
    def stat(tab):
        M = tab.shape[1]
        return np.partition(tab, M - L, axis=1)[:, M - L :].sum(axis=1)

    return stat


def _center_payload(scan: _Scan, idx: int, ell_is_one: bool):
    cen = scan.center(idx)
    return {"center": [c[0] for c in cen]} if ell_is_one else {"lists": cen}


def _top_messages(agree: np.ndarray, msgs: np.ndarray, L: int) -> list[int]:
    # stable sort keeps smaller message indices first among ties
    order = np.argsort(-agree, kind="stable")[:L]
    return sorted(msgs[order].tolist())


def _count_check(C, name, thr, ell, L, cap, center_cap) -> Verdict:
    words, msgs = _words(C, cap)
    scan = _Scan(words, C.field.q, ell, center_cap)
    best, arg = _scan_max(scan, _count_above(thr))
    holds = best < L
    wit = None
    if not holds:
        agree = scan.agreements(arg)
        wit = _center_payload(scan, arg, ell == 1)
        wit["messages"] = sorted(msgs[agree > thr].tolist())
    return Verdict(name, holds, Fraction(best), wit)


def check_list_decodable(
    C: LinearCode, rho, L: int, cap: int = CODEWORD_CAP, center_cap: int = CENTER_CAP
) -> Verdict:
    """Every open ball of relative radius rho holds fewer than L codewords."""
    rho = as_fraction(rho)
    # dist < rho  <=>  agreement > n - rho n
    thr = math.floor(C.n - rho * C.n)
    return _count_check(C, "LD", thr, 1, L, cap, center_cap)


def check_list_recoverable(
    C: LinearCode, alpha, ell: int, L: int, cap: int = CODEWORD_CAP, center_cap: int = CENTER_CAP
) -> Verdict:
    """For every choice of lists, fewer than L codewords have agreement > alpha.

    alpha = 1 names zero-error recovery and is read as agreement = 1, the
    same as :func:`check_zero_error_lr`.
    """
    alpha = as_fraction(alpha)
    thr = C.n - 1 if alpha == 1 else math.floor(alpha * C.n)
    return _count_check(C, "LR", thr, ell, L, cap, center_cap)


def check_zero_error_lr(
    C: LinearCode, ell: int, L: int, cap: int = CODEWORD_CAP, center_cap: int = CENTER_CAP
) -> Verdict:
    """Fewer than L codewords lie inside any ell x ... x ell rectangle."""
    return _count_check(C, "ZELR", C.n - 1, ell, L, cap, center_cap)


def _best_mean_bruteforce(agree: np.ndarray, L: int, cap: int) -> Fraction:
    """Largest mean of agree over subsets of size >= L, by listing them."""
    M = agree.size
    total = sum(math.comb(M, s) for s in range(L, M + 1))
    if total > cap:
        raise EnumerationTooLarge(f"{total} subsets exceed cap {cap}")
    best = None
    for s in range(L, M + 1):
        idx = np.array(list(combinations(range(M), s)), dtype=np.int64).reshape(-1, s)
        m = Fraction(int(agree[idx].sum(axis=1).max()), s)
        best = m if best is None or m > best else best
    return best


def _avg_check(C, name, eps, ell, L, cap, center_cap, exhaustive_subsets, subset_cap):
    words, msgs = _words(C, cap)
    M, n = words.shape
    eps = as_fraction(eps)
    if L > M:
        return Verdict(name, True, None)
    scan = _Scan(words, C.field.q, ell, center_cap)
    if exhaustive_subsets:
        best, arg = None, -1
        for off, tab in scan.blocks():
            for t in range(tab.shape[0]):
                m = _best_mean_bruteforce(tab[t].astype(np.int64), L, subset_cap)
                if best is None or m > best:
                    best, arg = m, off + t
        mean = best / n
    else:
        top, arg = _scan_max(scan, _top_sum(L))
        mean = Fraction(top, L * n)
    holds = mean <= eps
    wit = None
    if not holds:
        agree = scan.agreements(arg)
        wit = _center_payload(scan, arg, ell == 1)
        wit["messages"] = _top_messages(agree, msgs, L)
    return Verdict(name, holds, mean, wit)


def check_avg_radius_list_decodable(
    C: LinearCode,
    rho,
    L: int,
    cap: int = CODEWORD_CAP,
    center_cap: int = CENTER_CAP,
    exhaustive_subsets: bool = False,
    subset_cap: int = 1 << 20,
) -> Verdict:
    """For every z and every set of >= L codewords, the mean distance to z is >= rho.

    The closest sets are the L nearest codewords, so only those are
    examined unless `exhaustive_subsets` asks for every subset.
    """
    v = _avg_check(
        C, "ARLD", agreement_from_radius(rho), 1, L, cap, center_cap, exhaustive_subsets, subset_cap
    )
    stat = None if v.statistic is None else 1 - v.statistic
    return Verdict("ARLD", v.holds, stat, v.witness)


def check_avg_radius_list_recoverable(
    C: LinearCode,
    eps,
    ell: int,
    L: int,
    cap: int = CODEWORD_CAP,
    center_cap: int = CENTER_CAP,
    exhaustive_subsets: bool = False,
    subset_cap: int = 1 << 20,
) -> Verdict:
    """For every choice of lists, the L best-agreeing codewords have mean agreement <= eps."""
    return _avg_check(C, "ARLR", eps, ell, L, cap, center_cap, exhaustive_subsets, subset_cap)


# witness pairs


def pair_from_codewords(F, words: np.ndarray, n: int, min_dim: int = 0, filler=None) -> WitnessPair:
    """Encode a set of codewords as (X, Lam) with X spanning F^d.

    The columns of X are the RREF basis of the span of the words, and each
    word becomes its coordinate vector in that basis. When the span is
    zero and min_dim is 1, the nonzero codeword `filler` is used as the
    single column.
    """
    words = np.atleast_2d(np.asarray(words, dtype=np.int64))
    B, piv = row_reduce(F, words)
    if not piv and min_dim and filler is not None:
        return WitnessPair(F, np.asarray(filler, dtype=np.int64)[:, None], np.zeros((words.shape[0], 1), dtype=np.int64))
    X = B.T if piv else np.zeros((n, 0), dtype=np.int64)
    return WitnessPair(F, X, words[:, piv])


def find_average_bad_witness(
    C: LinearCode,
    eps,
    ell: int,
    L: int,
    d_max: int | None = None,
    cap: int = CODEWORD_CAP,
    center_cap: int = CENTER_CAP,
) -> WitnessPair | None:
    """A pair (X, Lam) with cols(X) in C, d <= d_max, |Lam| >= L and summed
    top-ell plurality strictly above eps n.

    Such a pair exists exactly when the average-radius checker fails; the
    codewords X v of the returned pair are the L best-agreeing codewords
    of a violating center. When d_max is below the code dimension only the
    top-L set of each violating center is tried.
    """
    eps = as_fraction(eps)
    words, msgs = _words(C, cap)
    M, n = words.shape
    if d_max is None:
        d_max = C.k
    if L > M:
        return None
    F = C.field
    scan = _Scan(words, F.q, ell, center_cap)
    limit = math.floor(eps * n * L)
    stat = _top_sum(L)
    nonzero = np.flatnonzero(words.any(axis=1))
    filler = words[nonzero[0]] if nonzero.size else None
    for off, tab in scan.blocks():
        vals = stat(tab)
        for t in np.flatnonzero(vals > limit):
            order = np.argsort(-tab[t], kind="stable")[:L]
            omega = words[np.sort(order)]
            w = pair_from_codewords(F, omega, n, min_dim=1 if d_max >= 1 else 0, filler=filler)
            if w.d <= d_max:
                return w
    return None


def find_all_bad_witness(
    C: LinearCode, ell: int, L: int, cap: int = CODEWORD_CAP, center_cap: int = CENTER_CAP
) -> WitnessPair | None:
    """A pair with cols(X) in C whose codewords fill an ell-rectangle, |Lam| >= L."""
    words, _ = _words(C, cap)
    M, n = words.shape
    if L > M:
        return None
    F = C.field
    scan = _Scan(words, F.q, ell, center_cap)
    nonzero = np.flatnonzero(words.any(axis=1))
    filler = words[nonzero[0]] if nonzero.size else None
    for off, tab in scan.blocks():
        full = (tab == n).sum(axis=1)
        hit = np.flatnonzero(full >= L)
        if hit.size:
            inside = tab[hit[0]] == n
            return pair_from_codewords(F, words[inside], n, min_dim=1, filler=filler)
    return None


def average_bad_exists_bruteforce(C: LinearCode, eps, ell: int, L: int, cap: int = 1 << 22) -> bool:
    """Whether some L distinct codewords, as a witness pair, have summed
    top-ell plurality > eps n. Lists every L-subset of codewords.

    Only size-L subsets are needed: dropping the worst message from a larger
    set cannot lower the best center's mean agreement.
    """
    words, _ = _words(C, CODEWORD_CAP)
    M, n = words.shape
    if L > M:
        return False
    if math.comb(M, L) > cap:
        raise EnumerationTooLarge(f"C({M},{L}) subsets exceed cap {cap}")
    q = C.field.q
    eps = as_fraction(eps)
    idx = np.array(list(combinations(range(M), L)), dtype=np.int64).reshape(-1, L)
    sub = words[idx]  # (N, L, n)
    counts = np.zeros((idx.shape[0], n, q), dtype=np.int64)
    for j in range(L):
        np.add.at(counts, (np.arange(idx.shape[0])[:, None], np.arange(n)[None, :], sub[:, j, :]), 1)
    tops = -np.sort(-counts, axis=2)[:, :, :ell].sum(axis=(1, 2))
    return bool((Fraction(1, L) * int(tops.max())) > eps * n)


def all_bad_exists_bruteforce(C: LinearCode, ell: int, L: int, cap: int = 1 << 22) -> bool:
    """Whether some L distinct codewords show at most ell symbols in every position."""
    words, _ = _words(C, CODEWORD_CAP)
    M, n = words.shape
    if L > M:
        return False
    if math.comb(M, L) > cap:
        raise EnumerationTooLarge(f"C({M},{L}) subsets exceed cap {cap}")
    idx = np.array(list(combinations(range(M), L)), dtype=np.int64).reshape(-1, L)
    sub = np.sort(words[idx], axis=1)
    distinct = 1 + (np.diff(sub, axis=1) != 0).sum(axis=1)
    return bool((distinct <= ell).all(axis=1).any())


def verify_average_bad(C: LinearCode, w: WitnessPair, eps, ell: int, L: int) -> bool:
    return contains_cols(C, w.X) and is_average_bad(w, L, w.d, eps, ell, strict=True)


def verify_all_bad(C: LinearCode, w: WitnessPair, ell: int, L: int) -> bool:
    return contains_cols(C, w.X) and is_all_bad(w, L, w.d, ell)
