"""Linear algebra over F_q on integer-index numpy arrays.

Vectors are 1-d int64 arrays and matrices are 2-d int64 arrays whose
entries are field indices. The field is always passed explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DuplicateVectors
from .galois import GF


def as_array(F: GF, a, ndim: int | None = None) -> np.ndarray:
    """Convert to an int64 array and check entries lie in [0, q)."""
    arr = np.array(a, dtype=np.int64)
    if ndim is not None and arr.ndim != ndim:
        if ndim == 2 and arr.size == 0:
            arr = arr.reshape(0, 0)
        else:
            raise DimensionMismatch(f"expected {ndim}-d array, got shape {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= F.q):
        raise ValueError(f"entries must lie in [0, {F.q})")
    return arr


def matmul(F: GF, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product over F for 2-d arrays."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[-1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    if F.m == 1:
        return (A @ B) % F.p
    out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    for t in range(A.shape[-1]):
        out = np.asarray(F.add(out, F.mul(A[..., t, None], B[t])))
    return out


def inner_product(F: GF, x, v) -> int:
    x = np.asarray(x, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if x.shape != v.shape or x.ndim != 1:
        raise DimensionMismatch(f"shapes {x.shape} and {v.shape}")
    return int(matmul(F, x[None, :], v[:, None])[0, 0])


def row_reduce(F: GF, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.

    Returns:
        (R, pivots) where R holds only the nonzero rows, one per pivot
        column, with a 1 in each pivot position.
    """
    R = np.array(M, dtype=np.int64)
    if R.ndim != 2:
        raise DimensionMismatch("row_reduce expects a matrix")
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = F.mul(R[r], F.inv(int(R[r, c])))
        f = R[:, c].copy()
        f[r] = 0
        hit = np.flatnonzero(f)
        if hit.size:
            R[hit] = F.sub(R[hit], F.mul(f[hit, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(F: GF, M) -> int:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    return len(row_reduce(F, M)[1])


def dim_span(F: GF, vectors) -> int:
    """Dimension of the span of the rows of `vectors`."""
    return rank(F, vectors)


def batch_rank(F: GF, M) -> np.ndarray:
    """Ranks of a stack of matrices with shape (S, r, c)."""
    M = np.array(M, dtype=np.int64)
    S, r, c = M.shape
    ptr = np.zeros(S, dtype=np.int64)
    rows = np.arange(r)
    for col in range(c):
        cand = (M[:, :, col] != 0) & (rows[None, :] >= ptr[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = np.flatnonzero(has)
        pr = ptr[sel]
        pv = np.argmax(cand[sel], axis=1)
        tmp = M[sel, pr].copy()
        M[sel, pr] = M[sel, pv]
        M[sel, pv] = tmp
        prow = M[sel, pr]
        prow = np.asarray(F.mul(prow, np.asarray(F.inv(prow[:, col]))[:, None]))
        M[sel, pr] = prow
        f = M[sel, :, col].copy()
        f[np.arange(sel.size), pr] = 0
        M[sel] = F.sub(M[sel], F.mul(f[:, :, None], prow[:, None, :]))
        ptr[sel] += 1
    return ptr


def span_contains(F: GF, basis: np.ndarray, pivots: list[int], V) -> np.ndarray:
    """Membership of each row of V in the row space of an RREF basis."""
    V = np.atleast_2d(np.asarray(V, dtype=np.int64))
    if len(pivots) == 0:
        return ~V.any(axis=1)
    resid = F.sub(V, matmul(F, V[:, pivots], basis))
    return ~np.asarray(resid).any(axis=1)


def canonical_order(vectors: np.ndarray) -> np.ndarray:
    """Indices sorting rows lexicographically by index tuple."""
    if vectors.shape[0] == 0:
        return np.arange(0)
    return np.lexsort(vectors.T[::-1])


def check_distinct(vectors: np.ndarray) -> None:
    if vectors.shape[0] and np.unique(vectors, axis=0).shape[0] != vectors.shape[0]:
        raise DuplicateVectors("message set contains duplicate vectors")


@dataclass(frozen=True, eq=False)
class WitnessPair:
    """Rows X (n x d) together with a message set Lam (L x d).

    The codewords described by the pair are X @ v for v in Lam.
    """

    field: GF
    X: np.ndarray
    Lam: np.ndarray

    def __post_init__(self):
        X = as_array(self.field, self.X)
        Lam = as_array(self.field, self.Lam)
        if X.ndim != 2 or Lam.ndim != 2:
            raise DimensionMismatch("X and Lam must be matrices")
        if X.shape[1] != Lam.shape[1]:
            raise DimensionMismatch(f"X has d={X.shape[1]} but Lam has d={Lam.shape[1]}")
        check_distinct(Lam)
        X.flags.writeable = False
        Lam.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Lam", Lam)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def L(self) -> int:
        return self.Lam.shape[0]

    def inner_products(self) -> np.ndarray:
        """The n x L table of <x_i, v_j>, i.e. the codeword symbols."""
        return matmul(self.field, self.X, self.Lam.T)


def projection_matrix(F: GF, Lam) -> tuple[np.ndarray, list[int]]:
    """Basis of span(Lam) used by :func:`project_pair`.

    Returns (B, pivots): B is the d' x d RREF basis of span(Lam) computed
    from Lam in canonical order. The coordinate map sends v in span(Lam) to
    v[pivots], and B.T sends coordinates back, so B.T @ v[pivots] = v.
    """
    Lam = np.asarray(Lam, dtype=np.int64)
    if Lam.shape[0] == 0:
        return np.zeros((0, Lam.shape[1]), dtype=np.int64), []
    return row_reduce(F, Lam[canonical_order(Lam)])


def project_pair(w: WitnessPair) -> WitnessPair:
    """Re-express (X, Lam) in dimension d' = dim span(Lam).

    Inner products are preserved: <x, v> = <B x, v[pivots]> for every v in
    span(Lam), because v = B.T v[pivots]. Rows become X' = X B.T and the
    message order is kept.
    """
    F = w.field
    B, piv = projection_matrix(F, w.Lam)
    X2 = matmul(F, w.X, B.T) if B.shape[0] else np.zeros((w.n, 0), dtype=np.int64)
    return WitnessPair(F, X2, w.Lam[:, piv])
