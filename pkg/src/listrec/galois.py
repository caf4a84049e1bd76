"""Arithmetic in finite fields F_q with q = p^m <= 2^16.

Elements are integer indices in [0, q). The base-p digits of an index are
the coefficients of a polynomial in F_p[x] reduced modulo the field's
modulus, lowest degree first. Index 0 is zero and index 1 is one.

All arithmetic methods on :class:`GF` accept Python ints or numpy integer
arrays and broadcast like numpy ufuncs. Scalars come back as Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import (
    FieldTooLarge,
    InvertZero,
    MixedFields,
    NonPrimeCharacteristic,
    ReducibleModulus,
)

MAX_ORDER = 1 << 16
# Full q x q addition and multiplication tables are kept below this size.
TABLE_ORDER = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a modulo b over F_p. Coefficients lowest degree first."""
    a = [c % p for c in a]
    db = len(b) - 1
    lead_inv = pow(b[-1], p - 2, p)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * lead_inv % p
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return a[:db]


def is_irreducible(modulus: list[int] | tuple[int, ...], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= m/2.

    Args:
        modulus: coefficients c_0..c_m with c_m = 1.
        p: the prime characteristic.
    """
    m = len(modulus) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    for deg in range(1, m // 2 + 1):
        for low in product(range(p), repeat=deg):
            if not any(_poly_rem(list(modulus), list(low) + [1], p)):
                return False
    return True


def default_modulus(p: int, m: int) -> tuple[int, ...]:
    """The built-in modulus for (p, m).

    This is the monic irreducible polynomial of degree m whose lower
    coefficients, read as a base-p integer c_0 + c_1 p + ..., are smallest.
    The choice is fixed, so every run uses the same polynomial.
    """
    if m == 1:
        return ()
    for idx in range(p**m):
        low = [(idx // p**i) % p for i in range(m)]
        cand = tuple(low) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise ReducibleModulus(f"no irreducible polynomial of degree {m} over F_{p}")


class GF:
    """The finite field F_{p^m}.

    Args:
        p: prime characteristic.
        m: extension degree.
        modulus: optional monic irreducible polynomial of degree m given as
            coefficients c_0..c_m. Ignored for m = 1.
    """

    def __init__(self, p: int, m: int = 1, modulus=None):
        p, m = int(p), int(m)
        if not is_prime(p):
            raise NonPrimeCharacteristic(f"{p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if p**m > MAX_ORDER:
            raise FieldTooLarge(f"{p}^{m} exceeds {MAX_ORDER}")
        if m == 1:
            mod: tuple[int, ...] = ()
        elif modulus is None:
            mod = default_modulus(p, m)
        else:
            mod = tuple(int(c) for c in modulus)
            if len(mod) != m + 1 or mod[-1] != 1:
                raise ReducibleModulus("modulus must be monic of degree m")
            if any(not 0 <= c < p for c in mod):
                raise ValueError("modulus coefficients must lie in [0, p)")
            if not is_irreducible(mod, p):
                raise ReducibleModulus(f"{mod} is reducible over F_{p}")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = mod
        self._build_tables()

    # construction

    def _digits(self) -> np.ndarray:
        idx = np.arange(self.q, dtype=np.int64)
        return np.stack([(idx // self.p**i) % self.p for i in range(self.m)], axis=1)

    def _from_digits(self, dig: np.ndarray) -> np.ndarray:
        w = self.p ** np.arange(self.m, dtype=np.int64)
        return (dig % self.p) @ w

    def _times_x(self) -> np.ndarray:
        """Index map a -> x*a."""
        p, m = self.p, self.m
        dig = self._digits()
        top = dig[:, m - 1]
        out = np.zeros_like(dig)
        out[:, 1:] = dig[:, :-1]
        out = out - top[:, None] * np.array(self.modulus[:m], dtype=np.int64)[None, :]
        return self._from_digits(out % p)

    def _times_elem(self, g: int, tx: np.ndarray) -> np.ndarray:
        """Index map a -> g*a, given the map a -> x*a."""
        p, m = self.p, self.m
        w = self.p ** np.arange(m, dtype=np.int64)
        gd = [(g // p**i) % p for i in range(m)]
        cur = np.arange(self.q, dtype=np.int64)
        acc = np.zeros((self.q, m), dtype=np.int64)
        for i in range(m):
            if gd[i]:
                acc += gd[i] * ((cur[:, None] // w[None, :]) % p)
            cur = tx[cur]
        return self._from_digits(acc % p)

    def _build_tables(self):
        q = self.q
        exp = np.zeros(2 * (q - 1) + 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        if q == 2:
            exp[:] = 1
        elif self.m == 1:
            fac = prime_factors(q - 1)
            g = next(
                g for g in range(2, q) if all(pow(g, (q - 1) // r, q) != 1 for r in fac)
            )
            acc = 1
            for i in range(q - 1):
                exp[i] = acc
                acc = acc * g % q
        else:
            tx = self._times_x()
            for g in range(2, q):
                tg = self._times_elem(g, tx)
                seq = [1]
                a = int(tg[1])
                while a != 1 and len(seq) < q:
                    seq.append(a)
                    a = int(tg[a])
                if len(seq) == q - 1:
                    exp[: q - 1] = seq
                    break
        exp[q - 1 : 2 * (q - 1)] = exp[: q - 1]
        exp[-1] = exp[0]
        log[exp[: q - 1]] = np.arange(q - 1)
        self._exp = exp
        self._log = log
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        self._inv = inv

        self._add_t = self._mul_t = None
        if q <= TABLE_ORDER:
            a = np.arange(q, dtype=np.int64)
            self._add_t = self._add_slow(a[:, None], a[None, :])
            self._mul_t = self._mul_slow(a[:, None], a[None, :])
        self._neg_t = self._neg_slow(np.arange(q, dtype=np.int64))
        for t in (self._exp, self._log, self._inv, self._neg_t, self._add_t, self._mul_t):
            if t is not None:
                t.flags.writeable = False

    def _add_slow(self, a, b):
        p = self.p
        if self.m == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        w = 1
        for _ in range(self.m):
            out += ((a // w % p + b // w % p) % p) * w
            w *= p
        return out

    def _neg_slow(self, a):
        p = self.p
        if self.m == 1:
            return (-a) % p
        if p == 2:
            return a.copy()
        out = np.zeros_like(a)
        w = 1
        for _ in range(self.m):
            out += ((-(a // w % p)) % p) * w
            w *= p
        return out

    def _mul_slow(self, a, b):
        if self.m == 1:
            return (a * b) % self.p
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    # identity

    def key(self) -> tuple:
        return (self.p, self.m, self.modulus)

    def __eq__(self, other):
        return isinstance(other, GF) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, modulus={list(self.modulus)})"

    def __reduce__(self):
        return (field, (self.p, self.m, self.modulus or None))

    def __call__(self, index: int) -> "FieldElement":
        return FieldElement(self, int(index))

    # arithmetic on indices

    @staticmethod
    def _out(r):
        return int(r) if np.ndim(r) == 0 else r

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._add_t is not None:
            return self._out(self._add_t[a, b])
        return self._out(self._add_slow(a, b))

    def neg(self, a):
        return self._out(self._neg_t[np.asarray(a, dtype=np.int64)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._mul_t is not None:
            return self._out(self._mul_t[a, b])
        return self._out(self._mul_slow(a, b))

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise InvertZero("zero has no multiplicative inverse")
        return self._out(self._inv[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        e = int(e)
        if e < 0:
            a = np.asarray(self.inv(a))
            e = -e
        if e == 0:
            return self._out(np.ones_like(a))
        r = self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._out(np.where(a == 0, 0, r))

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, i) for i in range(self.q)]

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, d: dict) -> "GF":
        return field(d["p"], d.get("m", 1), d.get("modulus") or None)


@lru_cache(maxsize=None)
def _field_cached(p: int, m: int, modulus) -> GF:
    return GF(p, m, modulus)


def field(p: int, m: int = 1, modulus=None) -> GF:
    """Cached constructor. Equal arguments give the same GF object."""
    mod = None if modulus is None or int(m) == 1 else tuple(int(c) for c in modulus)
    return _field_cached(int(p), int(m), mod)


def field_of_order(q: int) -> GF:
    """The field with q elements and its built-in modulus."""
    for p in prime_factors(q)[:1]:
        m = 0
        r = q
        while r % p == 0:
            r //= p
            m += 1
        if r == 1:
            return field(p, m)
    raise NonPrimeCharacteristic(f"{q} is not a prime power")


@dataclass(frozen=True)
class FieldElement:
    """A single element of a field, for code that prefers operators."""

    field: GF
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.field.q:
            raise ValueError(f"index {self.index} out of range for {self.field}")

    def _check(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise MixedFields(f"{self.field} vs {other.field}")
            return other.index
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p if self.field.m == 1 else int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._check(other)
        return FieldElement(self.field, self.field.add(self.index, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._check(other)
        return FieldElement(self.field, self.field.sub(self.index, b))

    def __mul__(self, other):
        b = self._check(other)
        return FieldElement(self.field, self.field.mul(self.index, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._check(other)
        return FieldElement(self.field, self.field.div(self.index, b))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.index))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.power(self.index, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.index))

    def __int__(self):
        return self.index

    def __repr__(self):
        return f"{self.index}@{self.field!r}"


def _same(a: FieldElement, b: FieldElement) -> GF:
    if a.field != b.field:
        raise MixedFields(f"{a.field} vs {b.field}")
    return a.field


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return FieldElement(_same(a, b), a.field.add(a.index, b.index))


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return FieldElement(_same(a, b), a.field.mul(a.index, b.index))


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def power(a: FieldElement, e: int) -> FieldElement:
    return a**e


def enumerate_elements(F: GF) -> list[FieldElement]:
    return F.elements()
