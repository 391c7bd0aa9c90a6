"""Exact rational scalar type.

gmpy2's ``mpq`` when available (same semantics as ``fractions.Fraction``,
hashes and compares equal to it, an order of magnitude faster); the
standard library type otherwise.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

RATIONAL_TYPES = (int, Fraction, type(Q(0)))


def to_q(x) -> Q:
    if type(x) is Q:
        return x
    if isinstance(x, str):
        return Q(Fraction(x))
    if isinstance(x, float):
        raise TypeError("floating-point coefficients are not accepted")
    if isinstance(x, Fraction):
        # a Fraction built from an mpq carries mpz parts, which mpq() rejects
        return Q(int(x.numerator), int(x.denominator))
    return Q(x)
