"""Entropy, Hamming volume, capacity and rate/list-size calculators.

All real arithmetic is 64-bit floating point. Logarithms written `log` in
formulas are natural. Absolute constants that the formulas leave
unspecified are arguments with default 1. List sizes can overflow a float,
so every list-size calculator also reports the natural log of the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConstraintViolated, DomainError
from .rational import as_fraction

REL_TOL = 1e-9


def _log_geq(a: float, b: float) -> bool:
    """a >= b for logarithms, forgiving rounding at the boundary."""
    return a >= b - 1e-12 * max(1.0, abs(a), abs(b))


def _xlogx(x: float) -> float:
    return 0.0 if x == 0 else x * math.log(x)


def entropy_q(x: float, q: float) -> float:
    """H_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)."""
    x = float(x)
    if not 0 <= x <= 1:
        raise DomainError(f"x={x} outside [0, 1]")
    if not q > 1:
        raise DomainError(f"q={q} must exceed 1")
    lq = math.log(q)
    first = 0.0 if x == 0 else x * math.log(q - 1)
    return (first - _xlogx(x) - _xlogx(1 - x)) / lq


def entropy_2(y: float) -> float:
    return entropy_q(y, 2)


def expansion_radius(q: float) -> float:
    """Radius of convergence in x of the expansion of H_q(1 - 1/q - x)."""
    return min(1 / q, 1 - 1 / q)


def entropy_expansion_around_uniform(x: float, q: float, terms: int) -> float:
    """Truncated power series of H_q(1 - 1/q - x) about x = 0.

    1 + sum_{j=1}^{terms} (-1)^j / (j (j+1)) (1 - (-1/(q-1))^j) q^j / ln q x^{j+1}.
    Converges for |x| < min(1/q, 1 - 1/q).
    """
    if not q > 1:
        raise DomainError(f"q={q} must exceed 1")
    if abs(x) >= expansion_radius(q):
        raise DomainError(f"|x|={abs(x)} outside the convergence radius {expansion_radius(q)}")
    lq = math.log(q)
    total = 1.0
    for j in range(1, terms + 1):
        coef = (-1) ** j / (j * (j + 1)) * (1 - (-1 / (q - 1)) ** j) * q**j / lq
        total += coef * x ** (j + 1)
    return total


def entropy_expansion_large_q(y: float, q: float, terms: int) -> float:
    """y + H_2(y)/log_2 q - (y / ln q) sum_{j=1}^{terms} q^{-j}/j."""
    if not 0 < y < 1:
        raise DomainError(f"y={y} outside (0, 1)")
    if not q > 1:
        raise DomainError(f"q={q} must exceed 1")
    tail = sum(q ** (-j) / j for j in range(1, terms + 1))
    return y + entropy_2(y) / math.log2(q) - y / math.log(q) * tail


def hamming_volume(q: int, n: int, rho) -> int:
    """Number of words within Hamming distance floor(rho n) of a fixed word."""
    rho = as_fraction(rho)
    if not 0 <= rho <= 1:
        raise DomainError(f"rho={rho} outside [0, 1]")
    r = math.floor(rho * n)
    return sum(math.comb(n, i) * (q - 1) ** i for i in range(r + 1))


def log_q(x: float, q: float) -> float:
    return math.log(x) / math.log(q)


def ld_capacity(q: float, rho: float) -> float:
    """1 - H_q(rho)."""
    return 1 - entropy_q(rho, q)


def lr_capacity(q: float, ell: int, alpha: float) -> float:
    """1 - H_{q/ell}(1 - alpha) - log_q ell."""
    if not q / ell > 1:
        raise DomainError("q/ell must exceed 1")
    return 1 - entropy_q(1 - float(alpha), q / ell) - log_q(ell, q)


# average-radius list recovery


@dataclass(frozen=True)
class RateBoundParams:
    """Parameters of the average-radius rate and list-size bounds.

    mu_bar_zero selects mu_bar = 0 (with beta = (q+1)^{zeta/(2(1-zeta))});
    otherwise mu_bar = ell/q and beta = 2.
    """

    q: float
    ell: int
    eps: float
    eta: float
    zeta: float
    xi: float
    mu_bar_zero: bool = True

    @property
    def mu_bar(self) -> float:
        return 0.0 if self.mu_bar_zero else self.ell / self.q

    @property
    def beta(self) -> float:
        if self.mu_bar_zero:
            return (self.q + 1) ** (self.zeta / (2 * (1 - self.zeta)))
        return 2.0

    def constraint_holds(self) -> bool:
        lhs = (1 - self.zeta) * (self.eps - self.eta)
        return lhs > self.beta * self.ell / self.q + self.mu_bar and self.zeta <= 1 / 20


@dataclass(frozen=True)
class RateBound:
    value: float
    binding: str
    linear: float
    entropy: float


def thm_avgrad_rate(params: RateBoundParams) -> RateBound:
    """min{(eps - beta ell/q - mu_bar)(1 - 5 zeta) - eta,
    1 - H_{q/ell}(1 - eps + eta) - log_q ell - xi} and which term is smaller."""
    P = params
    if not P.constraint_holds():
        raise ConstraintViolated(
            "need (1-zeta)(eps-eta) > beta ell/q + mu_bar and zeta <= 1/20"
        )
    lin = (P.eps - P.beta * P.ell / P.q - P.mu_bar) * (1 - 5 * P.zeta) - P.eta
    ent = 1 - entropy_q(1 - P.eps + P.eta, P.q / P.ell) - log_q(P.ell, P.q) - P.xi
    return RateBound(min(lin, ent), "linear" if lin <= ent else "entropy", lin, ent)


def thm_avgrad_log_list_size(params: RateBoundParams, C_prime: float = 1.0) -> float:
    """Natural log of ((1-eps+eta)/eta) (q ell/xi)^{C' log(ell zeta/xi)/zeta}
    (1/(eps-eta))^{C' log^2(ell zeta/xi)/zeta^3}."""
    P = params
    if min(P.eta, P.zeta, P.xi, C_prime) <= 0 or P.eps <= P.eta:
        raise DomainError("need positive eta, zeta, xi, C' and eps > eta")
    g = math.log(P.ell * P.zeta / P.xi)
    return (
        math.log((1 - P.eps + P.eta) / P.eta)
        + C_prime * g / P.zeta * math.log(P.q * P.ell / P.xi)
        + C_prime * g * g / P.zeta**3 * math.log(1 / (P.eps - P.eta))
    )


def _exp_or_inf(v: float) -> float:
    return math.exp(v) if v < 709 else math.inf


def thm_avgrad_list_size(params: RateBoundParams, C_prime: float = 1.0) -> float:
    return _exp_or_inf(thm_avgrad_log_list_size(params, C_prime))


@dataclass(frozen=True)
class R0Value:
    general: float
    simplified: float
    simplified_applies: bool


def cor_avgrad_R0(q: float, ell: int, eps: float, zeta: float) -> R0Value:
    """Linear rate term R0 of the average-radius rate bound.

    general: (eps - (ell/q)(1 + min{2, zeta ln(q+1)/(1-zeta)}))(1 - 5 zeta)
    simplified: (eps - ell/q)(1 - 6 zeta), valid when
        q >= (2 ell/((1-zeta) eps)) ln(2 ell/((1-zeta) eps)).
    """
    if not (0 < zeta < 1 and eps > 0 and q > 1):
        raise DomainError("need 0 < zeta < 1, eps > 0, q > 1")
    gen = (eps - ell / q * (1 + min(2.0, zeta * math.log(q + 1) / (1 - zeta)))) * (1 - 5 * zeta)
    simp = (eps - ell / q) * (1 - 6 * zeta)
    a = 2 * ell / ((1 - zeta) * eps)
    return R0Value(gen, simp, q >= a * math.log(a))


def cor_constantagr_window(q: int) -> tuple[float, float]:
    """Agreement window (eps0, eps1) on which the entropy term is the smaller one."""
    if q < 2:
        raise DomainError("q must be at least 2")
    if q == 2:
        return (0.51, 0.8)
    return (1 / q + 1 / q**2, max(0.8, 1 - 1.1 * math.log(q + 1) / q))


@dataclass(frozen=True)
class LargeAlphabetCheck:
    rate_bound: float
    log_list_bound: float
    list_bound: float
    q_ok: bool


def cor_largeq_check(
    ell: int, gamma: float, delta: float, q: float, C: float = 1.0, C_prime: float = 1.0
) -> LargeAlphabetCheck:
    """Large-alphabet rate and list-size check at eps = ell/q + delta.

    rate: (1 - H_{q/ell}(1 - ell/q - delta) - log_q ell)(1 - gamma)
    list: q^{C' log^2(ell/delta)}
    q_ok: q >= max{C (ell/delta)^2, ell^{C/delta}}
    """
    if not (0 < delta and 0 <= gamma < 1 and q > ell):
        raise DomainError("need delta > 0, 0 <= gamma < 1, q > ell")
    y = 1 - ell / q - delta
    if not 0 <= y <= 1:
        raise DomainError("1 - ell/q - delta outside [0, 1]")
    rate = (1 - entropy_q(y, q / ell) - log_q(ell, q)) * (1 - gamma)
    loglist = C_prime * math.log(ell / delta) ** 2 * math.log(q)
    lq = math.log(q)
    q_ok = _log_geq(lq, math.log(C) + 2 * math.log(ell / delta)) and _log_geq(
        lq, C / delta * math.log(ell)
    )
    return LargeAlphabetCheck(rate, loglist, _exp_or_inf(loglist), q_ok)


@dataclass(frozen=True)
class HighRateCheck:
    rate: float
    agreement: float
    log_list_bound: float
    list_bound: float
    q_ok: bool


def cor_highratelr_check(gamma: float, ell: int, q: float, C: float = 1.0) -> HighRateCheck:
    """High-rate list recovery: rate 1 - gamma, agreement 1 - gamma/10,
    L <= (q ell/gamma)^{log(ell)/gamma} exp(log^2(ell)/gamma^3), q >= ell^{C/gamma}."""
    if not (0 < gamma < 1 and ell >= 1 and q > 1):
        raise DomainError("need 0 < gamma < 1, ell >= 1, q > 1")
    le = math.log(ell)
    loglist = le / gamma * math.log(q * ell / gamma) + le * le / gamma**3
    q_ok = _log_geq(math.log(q), C / gamma * le)
    return HighRateCheck(1 - gamma, 1 - gamma / 10, loglist, _exp_or_inf(loglist), q_ok)


@dataclass(frozen=True)
class ZeroErrorBounds:
    rate_bound: float
    binding: str
    log_list_bound: float
    list_bound: float
    q_ok: bool


def thm_easy_bounds(
    q: float, ell: int, zeta: float, xi: float, base: str = "2ql/xi"
) -> ZeroErrorBounds:
    """Zero-error list recovery: rate <= min{1 - 3 zeta, 1 - log_q ell - xi} and
    L > max{2 ell/zeta, ell B^{2 log(2 ell/xi)/zeta}}.

    B is 2 q ell/xi by default; base="q" reads the exponential's base as q.
    q_ok reports q >= max{ell^{2/zeta}, (3 ell)^{1/zeta - 1}}.
    """
    if not 0 < zeta < 0.2:
        raise DomainError("zeta must lie in (0, 1/5)")
    if not xi > 0 or q <= 1 or ell < 1:
        raise DomainError("need xi > 0, q > 1, ell >= 1")
    a = 1 - 3 * zeta
    b = 1 - log_q(ell, q) - xi
    B = 2 * q * ell / xi if base == "2ql/xi" else q if base == "q" else None
    if B is None:
        raise DomainError(f"unknown base {base!r}")
    loglist = max(
        math.log(2 * ell / zeta),
        math.log(ell) + 2 * math.log(2 * ell / xi) / zeta * math.log(B),
    )
    lq = math.log(q)
    q_ok = _log_geq(lq, 2 / zeta * math.log(ell)) and _log_geq(lq, (1 / zeta - 1) * math.log(3 * ell))
    return ZeroErrorBounds(min(a, b), "zeta" if a <= b else "xi", loglist, _exp_or_inf(loglist), q_ok)


@dataclass(frozen=True)
class RateCurvePoint:
    eps: float
    R0: float
    R1: float
    R: float
    binding: str


def rate_curve(q: float, ell: int, zeta: float, eps_grid) -> list[RateCurvePoint]:
    """Both rate terms of the average-radius bound with eta = xi = 0.

    R0 is the general linear term from :func:`cor_avgrad_R0`; R1 is
    1 - H_{q/ell}(1 - eps) - log_q ell; R = min(R0, R1).
    """
    if not q / ell > 1:
        raise DomainError("q/ell must exceed 1")
    out = []
    for eps in eps_grid:
        eps = float(eps)
        if not ell / q < eps <= 1:
            raise DomainError(f"eps={eps} outside (ell/q, 1]")
        r0 = cor_avgrad_R0(q, ell, eps, zeta).general
        r1 = 1 - entropy_q(1 - eps, q / ell) - log_q(ell, q)
        out.append(RateCurvePoint(eps, r0, r1, min(r0, r1), "R0" if r0 <= r1 else "R1"))
    return out


def rate_curve_csv(points: list[RateCurvePoint]) -> str:
    lines = ["eps,R0,R1,R,binding"]
    for p in points:
        lines.append(f"{p.eps!r},{p.R0!r},{p.R1!r},{p.R!r},{p.binding}")
    return "\n".join(lines) + "\n"


def eps_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive decimal grid, rounded to avoid drift."""
    k = int(round((stop - start) / step))
    digits = max(0, -int(math.floor(math.log10(step))) + 2)
    return [round(start + i * step, digits) for i in range(k + 1)]
