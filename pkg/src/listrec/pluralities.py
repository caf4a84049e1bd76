"""Plurality statistics of message sets and the bad-pair predicates.

For a row x and a message set Lam, the inner products <x, v> over v in Lam
form a multiset of symbols. The plurality is the largest share of a single
symbol and the top-ell plurality is the combined share of the ell most
frequent symbols. All values are exact fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, EllExceedsField, EmptyLambda
from .fqla import WitnessPair, matmul, rank
from .galois import GF
from .rational import as_fraction


def _check_ell(F: GF, ell: int) -> None:
    if ell < 1:
        raise ValueError("ell must be positive")
    if ell > F.q:
        raise EllExceedsField(f"ell={ell} exceeds q={F.q}")


def symbol_counts(F: GF, table) -> np.ndarray:
    """Per-row symbol counts of an (n, L) table of field indices, shape (n, q)."""
    table = np.atleast_2d(np.asarray(table, dtype=np.int64))
    n, _ = table.shape
    counts = np.zeros((n, F.q), dtype=np.int64)
    np.add.at(counts, (np.repeat(np.arange(n), table.shape[1]), table.ravel()), 1)
    return counts


def top_counts(counts: np.ndarray, ell: int) -> np.ndarray:
    """Sum of the ell largest entries in each row of a count matrix."""
    s = -np.sort(-counts, axis=1)
    return s[:, :ell].sum(axis=1)


def ranked_symbols(counts: np.ndarray) -> np.ndarray:
    """Symbols of each row by decreasing count, ties by increasing index."""
    n, q = counts.shape
    idx = np.broadcast_to(np.arange(q), (n, q))
    return np.lexsort((idx, -counts), axis=1)


def _row_counts(F: GF, x, Lam) -> np.ndarray:
    Lam = np.atleast_2d(np.asarray(Lam, dtype=np.int64))
    x = np.asarray(x, dtype=np.int64)
    if Lam.shape[0] == 0:
        raise EmptyLambda("message set is empty")
    if x.shape != (Lam.shape[1],):
        raise DimensionMismatch(f"x has shape {x.shape}, messages have d={Lam.shape[1]}")
    return symbol_counts(F, matmul(F, x[None, :], Lam.T))[0]


def plurality(F: GF, x, Lam) -> Fraction:
    c = _row_counts(F, x, Lam)
    return Fraction(int(c.max()), int(c.sum()))


def plurality_top(F: GF, x, Lam, ell: int) -> Fraction:
    _check_ell(F, ell)
    c = _row_counts(F, x, Lam)
    return Fraction(int(top_counts(c[None, :], ell)[0]), int(c.sum()))


def argtop(F: GF, x, Lam, ell: int) -> list[int]:
    _check_ell(F, ell)
    c = _row_counts(F, x, Lam)
    return ranked_symbols(c[None, :])[0, :ell].tolist()


@dataclass(frozen=True)
class PluralityReport:
    x: tuple
    counts: dict
    pl: Fraction
    pl_top_ell: Fraction
    argtop: list


def plurality_report(F: GF, x, Lam, ell: int) -> PluralityReport:
    _check_ell(F, ell)
    c = _row_counts(F, x, Lam)
    L = int(c.sum())
    return PluralityReport(
        x=tuple(np.asarray(x).tolist()),
        counts={a: int(c[a]) for a in np.flatnonzero(c).tolist()},
        pl=Fraction(int(c.max()), L),
        pl_top_ell=Fraction(int(top_counts(c[None, :], ell)[0]), L),
        argtop=ranked_symbols(c[None, :])[0, :ell].tolist(),
    )


def _pair_counts(w: WitnessPair) -> np.ndarray:
    if w.L == 0:
        raise EmptyLambda("message set is empty")
    return symbol_counts(w.field, w.inner_products())


def plurality_vector(w: WitnessPair, ell: int) -> list[Fraction]:
    """pl^(ell) of every row of X, in row order."""
    _check_ell(w.field, ell)
    return [Fraction(int(t), w.L) for t in top_counts(_pair_counts(w), ell)]


def sum_plurality(w: WitnessPair, ell: int) -> Fraction:
    _check_ell(w.field, ell)
    return Fraction(int(top_counts(_pair_counts(w), ell).sum()), w.L)


def optimal_center(w: WitnessPair, ell: int) -> np.ndarray:
    """The ell x n center z with z[i, j] = i-th most frequent symbol of row j."""
    _check_ell(w.field, ell)
    return ranked_symbols(_pair_counts(w))[:, :ell].T.copy()


def list_agreement(z, y) -> Fraction:
    """Fraction of positions i with y[i] among the symbols z[:, i]."""
    z = np.atleast_2d(np.asarray(z))
    y = np.asarray(y)
    if z.shape[1] != y.shape[0]:
        raise DimensionMismatch("center and word lengths differ")
    return Fraction(int((z == y[None, :]).any(axis=0).sum()), y.shape[0])


def average_agreement(w: WitnessPair, z) -> Fraction:
    """Mean over v in Lam of the agreement of the codeword X v with center z."""
    z = np.atleast_2d(np.asarray(z, dtype=np.int64))
    words = w.inner_products().T
    hits = (words[:, None, :] == z[None, :, :]).any(axis=1).sum()
    return Fraction(int(hits), w.L * w.n)


def _spans_and_fits(w: WitnessPair, L: int, d: int | None) -> bool:
    if d is None:
        d = w.d
    if d != w.d:
        raise DimensionMismatch(f"pair lives in dimension {w.d}, not {d}")
    return w.L >= L and w.L > 0 and rank(w.field, w.X) == d and rank(w.field, w.Lam) <= d


def is_all_bad(w: WitnessPair, L: int, d: int | None, ell: int) -> bool:
    """Rows span F^d, |Lam| >= L, and each row sees at most ell symbols."""
    if not _spans_and_fits(w, L, d):
        return False
    distinct = (_pair_counts(w) > 0).sum(axis=1)
    return bool((distinct <= ell).all())


def is_average_bad(
    w: WitnessPair, L: int, d: int | None, eps, ell: int, strict: bool = False
) -> bool:
    """Rows span F^d, |Lam| >= L, and the summed top-ell plurality reaches eps n.

    With strict=True the last condition becomes a strict inequality, which
    is the form dual to the average-radius checker (see checkers).
    """
    if not _spans_and_fits(w, L, d):
        return False
    s = sum_plurality(w, ell)
    target = as_fraction(eps) * w.n
    return s > target if strict else s >= target
