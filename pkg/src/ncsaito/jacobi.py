"""Truncated Jacobi ideals, the finite-dimensionality certificate and HH_0.

Everything is linear algebra in F/m^(N+1): an ideal is represented by the
reduced echelon basis of its image, pivots taken at the lowest word, so
that the non-pivot words of low degree are a monomial basis of the
quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cyclic import Superpotential, canonical_terms, canonicalize, jacobi_generators
from .errors import LevelTooLarge, NotCertifiedFinite, TruncMismatch, ZeroPotential
from .exactlin import SparseEchelon
from .ncseries import Series, Word, count_words, word_key, words_of_degree

DEFAULT_NMAX = 10
DEFAULT_SIZE_GUARD = 1 << 22

__all__ = [
    "DEFAULT_NMAX",
    "DEFAULT_SIZE_GUARD",
    "JacobiReport",
    "TruncatedIdeal",
    "class_in_HH0",
    "finite_dim_certificate",
    "ideal_span",
    "is_quasi_homogeneous",
    "jacobi_generators",
    "span_of",
]


class TruncatedIdeal:
    """Reduced echelon basis of a subspace of F/m^(level+1)."""

    def __init__(self, nvars: int, level: int, echelon: SparseEchelon):
        echelon.interreduce()
        self.nvars = nvars
        self.level = level
        self._ech = echelon

    @property
    def pivots(self) -> list[Word]:
        return self._ech.pivots

    @property
    def rank(self) -> int:
        return len(self._ech)

    def basis(self) -> list[dict]:
        """Rows in pivot order, each a dict word -> coefficient (pivot coefficient 1)."""
        return [dict(self._ech.rows[p]) for p in self.pivots]

    def basis_by_degree(self) -> dict[int, list[dict]]:
        out: dict[int, list[dict]] = {}
        for p in self.pivots:
            out.setdefault(len(p), []).append(dict(self._ech.rows[p]))
        return out

    def _terms(self, f) -> dict:
        terms = f._terms if isinstance(f, Series) else f
        return {w: c for w, c in terms.items() if len(w) <= self.level}

    def reduce(self, f: Series) -> Series:
        """Normal form of f modulo the span (f truncated to this level)."""
        return Series._raw(self.nvars, f.trunc, self._ech.reduce(self._terms(f)))

    def contains(self, f) -> bool:
        return not self._ech.reduce(self._terms(f))

    def contains_word(self, w: Word) -> bool:
        return self.contains({tuple(w): 1})

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedIdeal):
            return NotImplemented
        return (self.nvars, self.level) == (other.nvars, other.level) and self._ech.rows == other._ech.rows

    def __hash__(self) -> int:
        return hash((self.nvars, self.level, self.rank))

    def __repr__(self) -> str:
        return f"TruncatedIdeal(nvars={self.nvars}, level={self.level}, rank={self.rank})"


def _guard(nvars: int, level: int, size_guard: int) -> None:
    size = count_words(nvars, level)
    if size > size_guard:
        raise LevelTooLarge(f"{size} monomials at level {level} exceed the size guard {size_guard}")


def span_of(rows: Iterable[Series | dict], nvars: int, level: int, size_guard: int = DEFAULT_SIZE_GUARD) -> TruncatedIdeal:
    """Plain linear span (no ideal closure) of rows truncated at ``level``."""
    _guard(nvars, level, size_guard)
    ech = SparseEchelon(key=word_key)
    for r in rows:
        terms = r._terms if isinstance(r, Series) else r
        ech.add({w: c for w, c in terms.items() if len(w) <= level})
    return TruncatedIdeal(nvars, level, ech)


def _words_upto(nvars: int, top: int):
    for d in range(top + 1):
        yield from words_of_degree(nvars, d)


def ideal_span(gens: Sequence[Series], level: int, size_guard: int = DEFAULT_SIZE_GUARD) -> TruncatedIdeal:
    """Span of all u*g*v with deg u + ord g + deg v <= level, i.e. (J + m^(N+1)) / m^(N+1)."""
    if not gens:
        raise ValueError("need at least one generator")
    nvars = gens[0].nvars
    _guard(nvars, level, size_guard)
    ech = SparseEchelon(key=word_key)
    pieces = []
    for g in gens:
        if g.is_zero():
            continue
        terms = [(w, c) for w, c in g.sorted_terms() if len(w) <= level]
        if terms:
            pieces.append((len(terms[0][0]), terms))
    # low-degree rows first keeps the reduction short
    for room in range(level + 1):
        for lo, terms in pieces:
            slack = room - lo
            if slack < 0:
                continue
            for du in range(slack + 1):
                for u in words_of_degree(nvars, du):
                    for v in words_of_degree(nvars, slack - du):
                        cap = level - du - len(v)
                        ech.add({u + w + v: c for w, c in terms if len(w) <= cap})
    return TruncatedIdeal(nvars, level, ech)


@dataclass(frozen=True)
class JacobiReport:
    """Outcome of the certificate search.

    ``finite`` means m^nil_degree lies in the Jacobi ideal; ``normal_words``
    (degree < nil_degree) then form a basis of the Jacobi algebra.  When the
    search fails, ``finite`` is False and the result is inconclusive.
    """

    finite: bool
    searched_to: int
    nil_degree: int | None = None
    normal_words: tuple[Word, ...] = ()
    ideal: TruncatedIdeal | None = field(default=None, compare=False, repr=False)

    @property
    def dimension(self) -> int | None:
        return len(self.normal_words) if self.finite else None


def _max_level(phi: Superpotential | Series, nmax: int) -> int:
    # D_i(Phi) is exact only modulo m^trunc
    return min(nmax, phi.trunc - 1)


def finite_dim_certificate(
    phi: Superpotential, nmax: int = DEFAULT_NMAX, size_guard: int = DEFAULT_SIZE_GUARD
) -> JacobiReport:
    """Search N = 1..nmax for the first level where every degree-N word lies in the span."""
    if not isinstance(phi, Superpotential):
        phi = canonicalize(phi)
    if phi.is_zero():
        raise ZeroPotential("the zero superpotential has no Jacobi algebra certificate")
    gens = jacobi_generators(phi)
    n = phi.nvars
    top = _max_level(phi, nmax)
    for level in range(1, top + 1):
        ideal = ideal_span(gens, level, size_guard)
        piv = set(ideal.pivots)
        if all(w in piv for w in words_of_degree(n, level)):
            normal = tuple(w for w in _words_upto(n, level - 1) if w not in piv)
            return JacobiReport(True, level, level, normal, ideal)
    return JacobiReport(False, max(top, 0))


def _require_finite(phi, report, nmax, size_guard) -> JacobiReport:
    if report is None:
        report = finite_dim_certificate(phi, nmax, size_guard)
    if not report.finite:
        raise NotCertifiedFinite(f"no finiteness certificate up to level {report.searched_to}")
    return report


def class_in_HH0(
    theta: Superpotential,
    phi: Superpotential,
    report: JacobiReport | None = None,
    nmax: int = DEFAULT_NMAX,
    size_guard: int = DEFAULT_SIZE_GUARD,
) -> Series:
    """Residue of [theta] in HH_0 of the Jacobi algebra of phi (zero iff the class vanishes).

    With m^N inside J (N = nil_degree) every word of degree >= N is zero in
    the quotient, so it suffices to reduce the canonical form of theta
    modulo the canonical images of the ideal rows of degree < N.
    """
    if not isinstance(phi, Superpotential):
        phi = canonicalize(phi)
    if not isinstance(theta, Superpotential):
        theta = canonicalize(theta)
    if theta.nvars != phi.nvars:
        raise TruncMismatch("theta and phi live over different alphabets")
    report = _require_finite(phi, report, nmax, size_guard)
    level = report.nil_degree - 1
    if theta.trunc < level:
        raise TruncMismatch(f"theta is truncated below the working level {level}")
    rows = ideal_span(jacobi_generators(phi), level, size_guard).basis() if level >= 0 else []
    ech = SparseEchelon(key=word_key)
    for r in rows:
        ech.add(canonical_terms(r))
    target = {w: c for w, c in theta.rep._terms.items() if len(w) <= level}
    return Series._raw(theta.nvars, theta.trunc, ech.reduce(target))


def is_quasi_homogeneous(
    phi: Superpotential,
    report: JacobiReport | None = None,
    nmax: int = DEFAULT_NMAX,
    size_guard: int = DEFAULT_SIZE_GUARD,
) -> bool:
    """True iff [phi] vanishes in HH_0 of its own Jacobi algebra."""
    return class_in_HH0(phi, phi, report, nmax, size_guard).is_zero()
