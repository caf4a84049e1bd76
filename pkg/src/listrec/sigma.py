"""The dependency measure sigma_p of a message set and what it certifies.

sigma_p(Lam) is the expectation of q^-dim span(v_1, ..., v_p) over p
independent uniform draws from Lam. A small value means Lam has little
linear structure. A large value forces a large subset of Lam into a
low-dimensional subspace, and the extraction routines below find one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .codes import messages
from .errors import (
    DimensionMismatch,
    DuplicateVectors,
    EmptyLambda,
    EnumerationTooLarge,
    HypothesisViolated,
    SearchTooLarge,
)
from .fqla import batch_rank, matmul
from .galois import GF
from .pluralities import _check_ell, symbol_counts, top_counts
from .rational import as_fraction, le_times_qpow, qpow_ge

SIGMA_CAP = 10**7
SEARCH_BUDGET = 200_000
MOMENT_CAP = 1 << 20


def _lam(F: GF, Lam) -> np.ndarray:
    Lam = np.atleast_2d(np.asarray(Lam, dtype=np.int64))
    if Lam.shape[0] and np.unique(Lam, axis=0).shape[0] != Lam.shape[0]:
        raise DuplicateVectors("message set contains duplicate vectors")
    return Lam


class _Span:
    """A subspace spanned by members of Lam, with its Lam-members.

    The RREF basis is built on first use from the parent span and the
    vector that extended it, since most spans are never extended.
    """

    __slots__ = ("_basis", "_piv", "mask", "dim", "_parent", "_vec", "_lead")

    def __init__(self, mask, dim, basis=None, piv=None, parent=None, vec=None, lead=None):
        self.mask = mask
        self.dim = dim
        self._basis = basis
        self._piv = piv
        self._parent = parent
        self._vec = vec
        self._lead = lead

    def key(self) -> bytes:
        return np.packbits(self.mask).tobytes()

    def basis(self, F: GF):
        if self._basis is None:
            par = self._parent
            pb, pp = par.basis(F)
            vec, c = self._vec, self._lead
            if par.dim:
                f = pb[:, c]
                b = np.vstack([np.asarray(F.sub(pb, F.mul(f[:, None], vec[None, :]))), vec])
            else:
                b = vec[None, :].copy()
            piv = list(pp) + [c]
            order = np.argsort(piv)
            self._basis = b[order]
            self._piv = [piv[i] for i in order]
            self._parent = self._vec = None
        return self._basis, self._piv

    def extensions(self, F: GF, Lam: np.ndarray, enc: np.ndarray | None):
        """Distinct spans V + v for v in Lam outside V.

        Two vectors give the same extension exactly when their residuals
        modulo V are proportional, so vectors are grouped by normalized
        residual and each group joins the member set.

        Returns (masks, children): a (G, L) boolean array of member sets
        and a function building the g-th child span.
        """
        idx = np.flatnonzero(~self.mask)
        if idx.size == 0:
            return np.zeros((0, self.mask.size), dtype=bool), None
        r = Lam[idx]
        if self.dim:
            B, piv = self.basis(F)
            r = np.asarray(F.sub(r, matmul(F, r[:, piv], B)))
        lead = np.argmax(r != 0, axis=1)
        scale = np.asarray(F.inv(r[np.arange(idx.size), lead]))
        r = np.asarray(F.mul(r, scale[:, None]))
        if enc is not None:
            _, first, inverse = np.unique(r @ enc, return_index=True, return_inverse=True)
        else:
            _, first, inverse = np.unique(r, axis=0, return_index=True, return_inverse=True)
        inverse = inverse.reshape(-1)
        G = first.size
        masks = np.repeat(self.mask[None, :], G, axis=0)
        masks[inverse, idx] = True

        def child(g: int) -> "_Span":
            return _Span(masks[g], self.dim + 1, parent=self, vec=r[first[g]], lead=int(lead[first[g]]))

        return masks, child


def _encoder(F: GF, d: int) -> np.ndarray | None:
    """Weights packing a vector of F^d into one int64, when it fits."""
    if d * math.log2(F.q) > 62:
        return None
    return F.q ** np.arange(d, dtype=np.int64)


def _zero_span(Lam: np.ndarray) -> _Span:
    d = Lam.shape[1]
    return _Span(~Lam.any(axis=1), 0, basis=np.zeros((0, d), dtype=np.int64), piv=[])


# sigma_p


def sigma_profile_exact(F: GF, Lam, p_max: int, cap: int = SIGMA_CAP) -> list[Fraction]:
    """[sigma_1, ..., sigma_p_max] exactly.

    Ordered tuples are aggregated by the span of their prefix, so each
    tuple is counted exactly once without being listed. `cap` bounds the
    work as (number of distinct prefix spans) x |Lam| per step.
    """
    Lam = _lam(F, Lam)
    L = Lam.shape[0]
    if L == 0:
        raise EmptyLambda("message set is empty")
    enc = _encoder(F, Lam.shape[1])
    start = _zero_span(Lam)
    # key -> [number of prefixes, span, members in span]
    states = {start.key(): [1, start, int(start.mask.sum())]}
    out = []
    for p in range(1, p_max + 1):
        if len(states) * L > cap:
            raise EnumerationTooLarge(f"{len(states)} spans x {L} exceeds cap {cap}")
        # the next draw either stays in the span or raises the dimension by one
        total = Fraction(0)
        for cnt, sp, stay in states.values():
            total += Fraction(cnt * (stay * F.q + (L - stay)), F.q ** (sp.dim + 1))
        out.append(total / L**p)
        if p == p_max:
            break
        nxt: dict[bytes, list] = {}
        for key, (cnt, sp, stay) in states.items():
            if stay:
                ent = nxt.setdefault(key, [0, sp, stay])
                ent[0] += cnt * stay
            masks, child = sp.extensions(F, Lam, enc)
            if not masks.shape[0]:
                continue
            sizes = masks.sum(axis=1)
            packed = np.packbits(masks, axis=1)
            for g in range(masks.shape[0]):
                k2 = packed[g].tobytes()
                ent = nxt.get(k2)
                if ent is None:
                    ent = nxt[k2] = [0, child(g), int(sizes[g])]
                ent[0] += cnt * (int(sizes[g]) - stay)
        states = nxt
    return out


def sigma_exact(F: GF, Lam, p: int, cap: int = SIGMA_CAP) -> Fraction:
    if p == 0:
        return Fraction(1)
    return sigma_profile_exact(F, Lam, p, cap)[-1]


def sigma_bruteforce(F: GF, Lam, p: int, cap: int = SIGMA_CAP) -> Fraction:
    """sigma_p by listing all L^p ordered tuples. Used as a test oracle."""
    Lam = _lam(F, Lam)
    L = Lam.shape[0]
    if L**p > cap:
        raise EnumerationTooLarge(f"{L}^{p} tuples exceed cap {cap}")
    idx = np.indices((L,) * p).reshape(p, -1).T
    ranks = batch_rank(F, Lam[idx])
    hist = np.bincount(ranks, minlength=p + 1)
    return sum(Fraction(int(c), F.q**r) for r, c in enumerate(hist)) / L**p


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    samples: int


def sigma_mc(
    F: GF, Lam, p: int, samples: int, rng: np.random.Generator, batch: int = 50_000
) -> MCEstimate:
    """Monte Carlo estimate of sigma_p with its standard error."""
    if samples < 1:
        raise ValueError("samples must be positive")
    Lam = _lam(F, Lam)
    L = Lam.shape[0]
    vals = np.empty(samples)
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        idx = rng.integers(0, L, size=(m, p))
        r = batch_rank(F, Lam[idx])
        vals[done : done + m] = float(F.q) ** (-r.astype(float))
        done += m
    se = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else float("nan")
    return MCEstimate(float(vals.mean()), se, samples)


@dataclass
class SigmaEntry:
    p: int
    value: Fraction | float
    mode: str
    samples: int | None = None
    stderr: float | None = None


@dataclass
class SigmaProfile:
    Lambda_size: int
    ambient_dim: int
    values: list[SigmaEntry] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema": "listrec.sigma/1",
            "Lambda_size": self.Lambda_size,
            "ambient_dim": self.ambient_dim,
            "values": [
                {
                    "p": e.p,
                    "value": str(e.value) if isinstance(e.value, Fraction) else e.value,
                    "float": float(e.value),
                    "mode": e.mode,
                    "samples": e.samples,
                    "stderr": e.stderr,
                }
                for e in self.values
            ],
        }


def sigma_profile(
    F: GF, Lam, p_max: int, samples: int | None = None, rng=None, cap: int = SIGMA_CAP
) -> SigmaProfile:
    """Exact profile when feasible, otherwise Monte Carlo if samples are given."""
    Lam = _lam(F, Lam)
    prof = SigmaProfile(Lam.shape[0], Lam.shape[1])
    try:
        for p, v in enumerate(sigma_profile_exact(F, Lam, p_max, cap), start=1):
            prof.values.append(SigmaEntry(p, v, "exact"))
    except EnumerationTooLarge:
        if samples is None:
            raise
        rng = rng if rng is not None else np.random.default_rng(0)
        for p in range(1, p_max + 1):
            est = sigma_mc(F, Lam, p, samples, rng)
            prof.values.append(SigmaEntry(p, est.mean, "monte_carlo", samples, est.stderr))
    return prof


# goodness thresholds


def zero_error_threshold(q: int, p: int) -> Fraction:
    """(1 + 1/q) / q^p."""
    return Fraction(q + 1, q) / Fraction(q) ** p


def small_range_limit(d: int, zeta) -> int:
    """Largest p with p <= (1 - zeta) d."""
    return math.floor((1 - as_fraction(zeta)) * d)


def within_large_threshold(sig: Fraction, q: int, d: int, zeta, ell: int, p: int) -> bool:
    """sig <= d / (q^{d(1-2 zeta)} ell^p), decided exactly."""
    expo = -(d * (1 - 2 * as_fraction(zeta)))
    return le_times_qpow(sig, Fraction(d, ell**p), q, expo)


@dataclass(frozen=True)
class Goodness:
    good: bool
    first_violation: int | None
    sigmas: tuple


def is_good_zero_error(F: GF, Lam, d: int, zeta, p_max: int | None = None) -> Goodness:
    """sigma_p <= (1 + 1/q)/q^p for 1 <= p <= p_max (default floor((1-zeta)d))."""
    limit = small_range_limit(d, zeta)
    if p_max is None:
        p_max = limit
    if p_max > limit:
        raise ValueError(f"p_max={p_max} exceeds (1 - zeta) d")
    sig = sigma_profile_exact(F, Lam, p_max) if p_max else []
    for p, s in enumerate(sig, start=1):
        if s > zero_error_threshold(F.q, p):
            return Goodness(False, p, tuple(sig))
    return Goodness(True, None, tuple(sig))


def is_good_average(F: GF, Lam, d: int, zeta, ell: int) -> Goodness:
    """Two-range goodness check up to p = d.

    For p <= (1 - zeta) d the bound is (1 + 1/q)/q^p; above it the bound
    is d / (q^{d(1-2 zeta)} ell^p). Equality counts as good.
    """
    Lam = _lam(F, Lam)
    if Lam.shape[1] != d:
        raise DimensionMismatch(f"messages have d={Lam.shape[1]}, not {d}")
    limit = small_range_limit(d, zeta)
    sig = sigma_profile_exact(F, Lam, d) if d else []
    for p, s in enumerate(sig, start=1):
        if p <= limit:
            ok = s <= zero_error_threshold(F.q, p)
        else:
            ok = within_large_threshold(s, F.q, d, zeta, ell, p)
        if not ok:
            return Goodness(False, p, tuple(sig))
    return Goodness(True, None, tuple(sig))


# low-dimensional subsets


@dataclass(frozen=True)
class Subset:
    """Indices into Lam of a subset, the dimension of its span, and how it was found."""

    indices: np.ndarray
    dim: int
    mode: str

    def __len__(self):
        return int(self.indices.size)


def _subset(sp: _Span, mode: str) -> Subset:
    return Subset(np.flatnonzero(sp.mask), sp.dim, mode)


def best_subsets_by_dim(
    F: GF, Lam, s_max: int, budget: int = SEARCH_BUDGET, greedy_fallback: bool = True
) -> list[Subset]:
    """For t = 0..s_max, a largest subset of Lam whose span has dimension <= t.

    Exhaustive mode walks every subspace spanned by members of Lam, level by
    level, deduplicated by member set. If the number of subspaces exceeds
    `budget` the search switches to greedy growth (repeatedly adding the
    extension that captures the most points) and the mode says so.
    """
    Lam = _lam(F, Lam)
    enc = _encoder(F, Lam.shape[1])
    level = [_zero_span(Lam)]
    best = [_subset(level[0], "exhaustive")]
    seen = 1
    mode = "exhaustive"
    for t in range(1, s_max + 1):
        if mode == "exhaustive":
            nxt: dict[bytes, _Span] = {}
            for sp in level:
                masks, child = sp.extensions(F, Lam, enc)
                packed = np.packbits(masks, axis=1)
                for g in range(masks.shape[0]):
                    k2 = packed[g].tobytes()
                    if k2 not in nxt:
                        nxt[k2] = child(g)
                if seen + len(nxt) > budget:
                    break
            seen += len(nxt)
            if seen > budget:
                if not greedy_fallback:
                    raise SearchTooLarge(f"more than {budget} subspaces")
                mode = "greedy"
                level = [max(level, key=lambda s: int(s.mask.sum()))]
            elif nxt:
                level = list(nxt.values())
        if mode == "greedy":
            masks, child = level[0].extensions(F, Lam, enc)
            if masks.shape[0]:
                level = [child(int(np.argmax(masks.sum(axis=1))))]
        top = max(level, key=lambda s: int(s.mask.sum()))
        cand = _subset(top, mode)
        prev = best[-1]
        best.append(cand if len(cand) >= len(prev) else Subset(prev.indices, prev.dim, mode))
    return best


def max_subset_of_dim(
    F: GF, Lam, s: int, budget: int = SEARCH_BUDGET, greedy_fallback: bool = True
) -> Subset:
    """A largest subset of Lam spanning a space of dimension at most s."""
    return best_subsets_by_dim(F, Lam, s, budget, greedy_fallback)[-1]


def lemma_subset_hypothesis(F: GF, Lam, p: int, T) -> bool:
    """sigma_p(Lam) > q^-p (1 + q T / L)^p, the premise for a large p-dim subset."""
    Lam = _lam(F, Lam)
    L = Lam.shape[0]
    bound = (1 + F.q * as_fraction(T) / L) ** p / Fraction(F.q) ** p
    return sigma_exact(F, Lam, p) > bound


def find_subset_dim_le_p(
    F: GF, Lam, p: int, T, budget: int = SEARCH_BUDGET
) -> Subset | None:
    """A subset of Lam of dimension <= p and size >= T, if the search finds one."""
    Lam = _lam(F, Lam)
    if as_fraction(T) <= 0:
        return Subset(np.zeros(0, dtype=np.int64), 0, "trivial")
    best = max_subset_of_dim(F, Lam, p, budget)
    return best if len(best) >= T else None


def extraction_fraction(q: int, d: int, zeta) -> float:
    """min{1/(2 d q^2), zeta/(q e)}."""
    return min(1 / (2 * d * q * q), float(as_fraction(zeta)) / (q * math.e))


@dataclass(frozen=True)
class Extraction:
    subset: Subset
    violating_p: int
    size_bound: float
    dim_bound: Fraction

    @property
    def meets_contract(self) -> bool:
        return len(self.subset) >= self.size_bound and self.subset.dim <= self.dim_bound

    def to_dict(self) -> dict:
        return {
            "schema": "listrec.extraction/1",
            "indices": self.subset.indices.tolist(),
            "dim": self.subset.dim,
            "mode": self.subset.mode,
            "violating_p": self.violating_p,
            "size_bound": self.size_bound,
            "dim_bound": str(self.dim_bound),
            "meets_contract": self.meets_contract,
        }


def check_extraction_hypothesis(q: int, ell: int, zeta) -> None:
    zeta = as_fraction(zeta)
    if not 0 < zeta < 1:
        raise HypothesisViolated("zeta must lie in (0, 1)")
    if not qpow_ge(q, 2 / zeta, ell):
        raise HypothesisViolated(f"q={q} is below ell^(2/zeta) for ell={ell}, zeta={zeta}")


def extract_low_dim_subset(
    F: GF, Lam, d: int, zeta, ell: int, budget: int = SEARCH_BUDGET
) -> Extraction | None:
    """Find a large low-dimensional subset of a message set that is not good.

    Returns None when Lam passes :func:`is_good_average`. Otherwise sweeps
    t = 0, 1, ... up to floor((1 - zeta) d) and returns the first largest
    subset of dimension <= t whose size reaches
    |Lam| * min{1/(2 d q^2), zeta/(q e)}, or the best one at the top level.
    """
    _check_ell(F, ell)
    check_extraction_hypothesis(F.q, ell, zeta)
    Lam = _lam(F, Lam)
    g = is_good_average(F, Lam, d, zeta, ell)
    if g.good:
        return None
    zeta = as_fraction(zeta)
    s_max = small_range_limit(d, zeta)
    bound = Lam.shape[0] * extraction_fraction(F.q, d, zeta)
    best = best_subsets_by_dim(F, Lam, s_max, budget)
    pick = next((b for b in best if len(b) >= bound), best[-1])
    return Extraction(pick, g.first_violation, bound, (1 - zeta) * d)


# plurality moments over uniform x


def top_count_histogram(
    F: GF, Lam, ell: int, include_zero: bool = True, cap: int = MOMENT_CAP
) -> dict[int, int]:
    """How many x in F^d have each value of the top-ell symbol count over Lam."""
    _check_ell(F, ell)
    Lam = _lam(F, Lam)
    d = Lam.shape[1]
    if F.q**d > cap:
        raise EnumerationTooLarge(f"{F.q}^{d} rows exceed cap {cap}")
    xs = messages(F, d)
    if not include_zero:
        xs = xs[1:]
    tops = top_counts(symbol_counts(F, matmul(F, xs, Lam.T)), ell)
    vals, cnt = np.unique(tops, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, cnt)}


def _moment(hist: dict[int, int], L: int, p: int, mu: Fraction) -> Fraction:
    N = sum(hist.values())
    return sum(c * (Fraction(t, L) - mu) ** p for t, c in hist.items()) / N


def centered_moment_exact(
    F: GF, Lam, d: int, p: int, ell: int, mu, include_zero: bool = True
) -> Fraction:
    """E_x (pl^(ell)_x(Lam) - mu)^p over uniform x in F^d."""
    Lam = _lam(F, Lam)
    if Lam.shape[1] != d:
        raise DimensionMismatch(f"messages have d={Lam.shape[1]}, not {d}")
    hist = top_count_histogram(F, Lam, ell, include_zero)
    return _moment(hist, Lam.shape[0], p, as_fraction(mu))


def raw_moment_exact(F: GF, Lam, d: int, p: int, ell: int, include_zero: bool = True) -> Fraction:
    """E_x (pl^(ell)_x(Lam))^p over uniform x in F^d."""
    return centered_moment_exact(F, Lam, d, p, ell, 0, include_zero)


@dataclass
class MomentCheck:
    p: int
    kind: str
    value: Fraction
    holds: bool


def moment_bound_checks(F: GF, Lam, d: int, zeta, ell: int) -> list[MomentCheck]:
    """Evaluate the moment bounds that hold for a good message set.

    kinds:
      centered: E(pl - 1/q)^p <= (2/q)^p for p <= (1-zeta) d (ell = 1 form)
      centered_ell: E(pl^(ell) - ell/q)^p <= (2 ell/q)^p on the same range
      raw: E(pl^(ell))^p <= q ell^p sigma_p for all p <= d
      large: E(pl^(ell) - ell/q)^p <= max{(ell/q)^p, d q^{1 - d(1-2 zeta)}}
             for (1-zeta) d < p <= d
      centering: E(Z - mu)^p <= max{mu^p, E Z^p} with Z = pl^(ell), mu = ell/q
    """
    Lam = _lam(F, Lam)
    q = F.q
    L = Lam.shape[0]
    zeta = as_fraction(zeta)
    limit = small_range_limit(d, zeta)
    sig = sigma_profile_exact(F, Lam, d) if d else []
    h1 = top_count_histogram(F, Lam, 1)
    hl = top_count_histogram(F, Lam, ell)
    mu1 = Fraction(1, q)
    mul = Fraction(ell, q)
    out = []
    for p in range(1, d + 1):
        raw = _moment(hl, L, p, Fraction(0))
        cen = _moment(hl, L, p, mul)
        out.append(MomentCheck(p, "raw", raw, raw <= q * ell**p * sig[p - 1]))
        out.append(MomentCheck(p, "centering", cen, cen <= max(mul**p, raw)))
        if p <= limit:
            c1 = _moment(h1, L, p, mu1)
            out.append(MomentCheck(p, "centered", c1, c1 <= (2 * mu1) ** p))
            out.append(MomentCheck(p, "centered_ell", cen, cen <= (2 * mul) ** p))
        else:
            ok = cen <= mul**p or le_times_qpow(cen, Fraction(d), q, 1 - d * (1 - 2 * zeta))
            out.append(MomentCheck(p, "large", cen, ok))
    return out
