"""Necklaces, canonical superpotentials and cyclic derivatives.

A superpotential is a class of F modulo the closed span of commutators.
Each class has exactly one representative supported on standard words
(the lexicographically largest rotation of each necklace); `Superpotential`
stores that representative.
"""

from __future__ import annotations

from functools import lru_cache
from typing import TYPE_CHECKING

from .rational import Q
from .errors import TruncMismatch, ZeroPotential
from .ncseries import Series, Word, derive_terms, _by_degree, _clean

if TYPE_CHECKING:
    from .derive import Derivation


@lru_cache(maxsize=1 << 18)
def standard_word(w: Word) -> Word:
    """Largest cyclic rotation of ``w`` (x_1 < x_2 < ...)."""
    w = tuple(w)
    if len(w) < 2:
        return w
    return max(w[i:] + w[:i] for i in range(len(w)))


def is_standard(w: Word) -> bool:
    return standard_word(w) == tuple(w)


def necklace(w: Word) -> frozenset:
    w = tuple(w)
    return frozenset(w[i:] + w[:i] for i in range(max(len(w), 1)))


def canonical_terms(terms) -> dict:
    out: dict = {}
    for w, c in terms.items():
        s = standard_word(w)
        out[s] = out.get(s, 0) + c
    return _clean(out)


class Superpotential:
    """Element of F / [F,F]^cl, held as its canonical representative."""

    __slots__ = ("rep",)

    def __init__(self, f: Series):
        self.rep = Series._raw(f.nvars, f.trunc, canonical_terms(f._terms))

    @property
    def nvars(self) -> int:
        return self.rep.nvars

    @property
    def trunc(self) -> int:
        return self.rep.trunc

    def __eq__(self, other) -> bool:
        if isinstance(other, Superpotential):
            return self.rep == other.rep
        if other == 0:
            return self.rep.is_zero()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("cyc", self.rep))

    def __bool__(self) -> bool:
        return bool(self.rep)

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __add__(self, other: Superpotential) -> Superpotential:
        return Superpotential(self.rep + other.rep)

    def __sub__(self, other: Superpotential) -> Superpotential:
        return Superpotential(self.rep - other.rep)

    def scale(self, c) -> Superpotential:
        return Superpotential(self.rep.scale(c))

    def truncate(self, level: int) -> Superpotential:
        return Superpotential(self.rep.truncate(level))

    def __repr__(self) -> str:
        return f"Superpotential({self.rep.to_str()}, trunc={self.trunc})"


def canonicalize(f: Series) -> Superpotential:
    """Projection pi: F -> F_cyc, returned in canonical form."""
    return Superpotential(f)


def order(phi: Superpotential) -> int:
    if phi.is_zero():
        raise ZeroPotential("the zero superpotential has no order")
    return phi.rep.order()


def _as_rep(phi) -> Series:
    return phi.rep if isinstance(phi, Superpotential) else canonicalize(phi).rep


def cyclic_derivative(phi: Superpotential | Series, i: int) -> Series:
    """D_{x_i}: each occurrence w = u x_i v contributes coeff * v u."""
    rep = _as_rep(phi)
    if not 0 <= i < rep.nvars:
        raise IndexError(f"generator index {i} out of range")
    out: dict = {}
    for w, c in rep._terms.items():
        for p, letter in enumerate(w):
            if letter == i:
                key = w[p + 1:] + w[:p]
                out[key] = out.get(key, 0) + c
    return Series._raw(rep.nvars, rep.trunc, _clean(out))


def jacobi_generators(phi: Superpotential | Series) -> list[Series]:
    """[D_1 Phi, ..., D_n Phi]."""
    rep = _as_rep(phi)
    return [cyclic_derivative(rep, i) for i in range(rep.nvars)]


def apply_derivation(xi: Derivation, phi: Superpotential | Series) -> Superpotential:
    """Phi_#(xi) = pi(xi(phi)); independent of the representative."""
    rep = _as_rep(phi)
    if xi.nvars != rep.nvars or xi.trunc != rep.trunc:
        raise TruncMismatch("derivation and superpotential disagree on nvars/trunc")
    buckets = [_by_degree(g._terms, rep.trunc) for g in xi.images]
    return Superpotential(Series._raw(rep.nvars, rep.trunc, derive_terms(rep._terms, buckets, rep.trunc)))


def euler_residual(phi: Superpotential, weights) -> Superpotential:
    """pi(sum_i r_i x_i D_i(Phi) - Phi); zero for weighted-homogeneous Phi."""
    rep = phi.rep
    acc = -rep
    for i, r in enumerate(weights):
        xi = Series.gen(i, rep.nvars, rep.trunc)
        acc = acc + (xi * cyclic_derivative(rep, i)).scale(Q(r))
    return canonicalize(acc)
