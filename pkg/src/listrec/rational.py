"""Helpers for exact comparisons involving rationals and real powers of q."""

from __future__ import annotations

from fractions import Fraction


def as_fraction(x) -> Fraction:
    """Exact rational value of x.

    Floats are read through their shortest decimal representation, so 0.1
    becomes 1/10 rather than the nearest binary fraction.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x))


def le_times_qpow(x: Fraction, c: Fraction, q: int, expo: Fraction) -> bool:
    """Decide x <= c * q**expo exactly, for c > 0 and rational expo."""
    x, c, expo = Fraction(x), Fraction(c), Fraction(expo)
    if x <= 0:
        return True
    a, b = expo.numerator, expo.denominator
    return (x / c) ** b <= Fraction(q) ** a


def qpow_ge(q: int, expo: Fraction, base: int) -> bool:
    """Decide q >= base**expo exactly, for positive integers q and base."""
    expo = Fraction(expo)
    a, b = expo.numerator, expo.denominator
    return Fraction(q) ** b >= Fraction(base) ** a
