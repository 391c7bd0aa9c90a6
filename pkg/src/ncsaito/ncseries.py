"""Truncated noncommutative power series.

A `Series` is an element of k<<x_1..x_n>> / m^(N+1): a finite map from words
(tuples of 0-based generator indices) to nonzero exact rationals, every stored word
of length at most ``trunc``.  `Endomorphism` is a continuous algebra map
given by the images of the generators, each in the maximal ideal m.

Word order everywhere is degree first, then lexicographic with
x_1 < x_2 < ... (so on tuples: ``(len(w), w)``).
"""

from __future__ import annotations

from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from .rational import Q, RATIONAL_TYPES, to_q
from .errors import NotAutomorphism, TruncMismatch
from .exactlin import RatMatrix

Word = tuple  # tuple[int, ...]

DEFAULT_TRUNC = 12


def word_key(w: Word) -> tuple[int, Word]:
    return (len(w), w)


def words_of_degree(nvars: int, d: int) -> Iterator[Word]:
    """All words of length ``d`` in increasing lexicographic order."""
    if d == 0:
        yield ()
        return
    for w in words_of_degree(nvars, d - 1):
        for i in range(nvars):
            yield w + (i,)


def count_words(nvars: int, upto: int) -> int:
    """Number of words of degree <= upto."""
    if nvars == 1:
        return upto + 1
    return (nvars ** (upto + 1) - 1) // (nvars - 1)


# ---------------------------------------------------------------------------
# term-dict kernels (no validation; callers guarantee consistency)


def _clean(terms: dict) -> dict:
    return {w: c for w, c in terms.items() if c}


def _by_degree(terms: Mapping, level: int) -> list[list]:
    buckets: list[list] = [[] for _ in range(level + 1)]
    for w, c in terms.items():
        if len(w) <= level:
            buckets[len(w)].append((w, c))
    while len(buckets) > 1 and not buckets[-1]:
        buckets.pop()
    return buckets


def _mul_into(out: dict, a: Mapping, bb: list[list], level: int) -> None:
    top = len(bb) - 1
    get = out.get
    for wa, ca in a.items():
        room = level - len(wa)
        if room < 0:
            continue
        for d in range(min(room, top) + 1):
            for wb, cb in bb[d]:
                w = wa + wb
                out[w] = get(w, 0) + ca * cb


def mul_terms(a: Mapping, b: Mapping, level: int) -> dict:
    out: dict = {}
    if a and b:
        _mul_into(out, a, _by_degree(b, level), level)
    return _clean(out)


def substitute_terms(terms: Mapping, images: Sequence[list[list]], level: int) -> dict:
    """Horner evaluation: f = c + sum_i f_i x_i  ->  c + sum_i H(f_i) H(x_i).

    ``images`` are the generator images bucketed by degree.  Since every
    image lies in m, words longer than ``level`` contribute nothing.
    """
    out: dict = {}
    groups: dict[int, dict] = {}
    for w, c in terms.items():
        if not w:
            out[()] = c
        elif len(w) <= level:
            groups.setdefault(w[-1], {})[w[:-1]] = c
    for i in sorted(groups):
        inner = substitute_terms(groups[i], images, level - 1)
        _mul_into(out, inner, images[i], level)
    return _clean(out)


def shift_terms(terms: Mapping, shifts: Sequence[list[list]], lo: int, level: int) -> dict:
    """f(x + h) - f(x) for shifts h_i of order >= ``lo`` >= 2 (bucketed by degree).

    Uses f = c + sum_i f_i x_i, so the difference is
    sum_i (D(f_i) (x_i + h_i) + f_i h_i); only words with
    len(w) + lo - 1 <= level can contribute.
    """
    out: dict = {}
    if level < lo:
        return out
    groups: dict[int, dict] = {}
    for w, c in terms.items():
        if w and len(w) + lo - 1 <= level:
            groups.setdefault(w[-1], {})[w[:-1]] = c
    get = out.get
    for i in sorted(groups):
        head = groups[i]
        inner = shift_terms(head, shifts, lo, level - 1)
        tail = (i,)
        for w, c in inner.items():
            key = w + tail
            out[key] = get(key, 0) + c
        _mul_into(out, inner, shifts[i], level)
        _mul_into(out, head, shifts[i], level)
    return _clean(out)


def derive_terms(terms: Mapping, images: Sequence[list[list]], level: int) -> dict:
    """Leibniz extension of x_i -> images[i] applied to a term dict."""
    out: dict = {}
    get = out.get
    for w, c in terms.items():
        n = len(w)
        room = level - n + 1
        if room < 1:
            continue
        for p, letter in enumerate(w):
            bb = images[letter]
            if len(bb) < 2:
                continue
            pre, post = w[:p], w[p + 1:]
            for d in range(1, min(room, len(bb) - 1) + 1):
                for wb, cb in bb[d]:
                    key = pre + wb + post
                    out[key] = get(key, 0) + c * cb
    return _clean(out)


def derive_terms_at(terms: Mapping, images: Sequence[list[list]], degree: int) -> dict:
    """The degree-``degree`` part of `derive_terms` (no lower degrees computed)."""
    out: dict = {}
    get = out.get
    for w, c in terms.items():
        d = degree - len(w) + 1
        if d < 1:
            continue
        for p, letter in enumerate(w):
            bb = images[letter]
            if d >= len(bb):
                continue
            pre, post = w[:p], w[p + 1:]
            for wb, cb in bb[d]:
                key = pre + wb + post
                out[key] = get(key, 0) + c * cb
    return _clean(out)


# ---------------------------------------------------------------------------


class Series:
    """Element of F/m^(N+1) with exact rational coefficients.  Immutable."""

    __slots__ = ("nvars", "trunc", "_terms", "_hash")

    def __init__(self, nvars: int, trunc: int, terms: Mapping | Iterable = (), *, _clean_input: bool = True):
        if nvars < 1:
            raise ValueError("need at least one generator")
        if trunc < 0:
            raise ValueError("truncation level must be >= 0")
        self.nvars = nvars
        self.trunc = trunc
        if _clean_input:
            items = terms.items() if isinstance(terms, Mapping) else terms
            t: dict = {}
            for w, c in items:
                w = tuple(w)
                if any(not (0 <= i < nvars) for i in w):
                    raise ValueError(f"letter out of range in word {w!r}")
                if len(w) > trunc:
                    continue
                c = c if type(c) is Q else to_q(c)
                t[w] = t.get(w, 0) + c
            self._terms = _clean(t)
        else:
            self._terms = terms
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, nvars: int, trunc: int, terms: dict) -> Series:
        return cls(nvars, trunc, terms, _clean_input=False)

    @classmethod
    def zero(cls, nvars: int, trunc: int = DEFAULT_TRUNC) -> Series:
        return cls._raw(nvars, trunc, {})

    @classmethod
    def one(cls, nvars: int, trunc: int = DEFAULT_TRUNC) -> Series:
        return cls._raw(nvars, trunc, {(): Q(1)})

    @classmethod
    def gen(cls, i: int, nvars: int, trunc: int = DEFAULT_TRUNC) -> Series:
        return cls(nvars, trunc, {(i,): 1})

    @classmethod
    def monomial(cls, word: Sequence[int], nvars: int, trunc: int = DEFAULT_TRUNC, coeff=1) -> Series:
        return cls(nvars, trunc, {tuple(word): coeff})

    # -- accessors -----------------------------------------------------------

    @property
    def terms(self) -> Mapping[Word, Q]:
        return MappingProxyType(self._terms)

    def coeff(self, w: Sequence[int]) -> Q:
        return self._terms.get(tuple(w), Q(0))

    def sorted_terms(self) -> list[tuple[Word, Q]]:
        return sorted(self._terms.items(), key=lambda t: word_key(t[0]))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Largest degree present (-1 for zero)."""
        return max((len(w) for w in self._terms), default=-1)

    def order(self) -> int | None:
        """Smallest degree present (None for zero)."""
        return min((len(w) for w in self._terms), default=None)

    def constant(self) -> Q:
        return self._terms.get((), Q(0))

    def in_max_ideal(self) -> bool:
        return () not in self._terms

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {len(w) for w in self._terms}
        if d is None:
            return len(degs) <= 1
        return degs <= {d}

    def linear_coeffs(self) -> tuple[Q, ...]:
        return tuple(self._terms.get((i,), Q(0)) for i in range(self.nvars))

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Series):
            return self.nvars == other.nvars and self.trunc == other.trunc and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, self.trunc, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Series({self.to_str()}, trunc={self.trunc})"

    def to_str(self, names: Sequence[str] | None = None) -> str:
        from .expr import format_series

        if names is None:
            names = default_names(self.nvars)
        return format_series(self, names)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: Series) -> None:
        if self.nvars != other.nvars or self.trunc != other.trunc:
            raise TruncMismatch(
                f"operands differ: (n={self.nvars}, N={self.trunc}) vs (n={other.nvars}, N={other.trunc})"
            )

    def _coerce(self, other) -> Series | None:
        if isinstance(other, Series):
            self._check(other)
            return other
        if isinstance(other, RATIONAL_TYPES):
            return Series(self.nvars, self.trunc, {(): other})
        return None

    def __add__(self, other) -> Series:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = dict(self._terms)
        for w, c in o._terms.items():
            t[w] = t.get(w, 0) + c
        return Series._raw(self.nvars, self.trunc, _clean(t))

    __radd__ = __add__

    def __neg__(self) -> Series:
        return Series._raw(self.nvars, self.trunc, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other) -> Series:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> Series:
        return (-self) + other

    def scale(self, c) -> Series:
        c = c if type(c) is Q else to_q(c)
        if not c:
            return Series.zero(self.nvars, self.trunc)
        return Series._raw(self.nvars, self.trunc, {w: c * v for w, v in self._terms.items()})

    def __mul__(self, other) -> Series:
        if isinstance(other, RATIONAL_TYPES):
            return self.scale(other)
        if not isinstance(other, Series):
            return NotImplemented
        self._check(other)
        return Series._raw(self.nvars, self.trunc, mul_terms(self._terms, other._terms, self.trunc))

    def __rmul__(self, other) -> Series:
        if isinstance(other, RATIONAL_TYPES):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, c) -> Series:
        return self.scale(1 / Q(c))

    def __pow__(self, k: int) -> Series:
        out = Series.one(self.nvars, self.trunc)
        for _ in range(k):
            out = out * self
        return out

    # -- graded pieces -------------------------------------------------------

    def homogeneous_part(self, r: int) -> Series:
        """Sum of the terms of degree exactly ``r``."""
        return Series._raw(self.nvars, self.trunc, {w: c for w, c in self._terms.items() if len(w) == r})

    def low_part(self, r: int) -> Series:
        """Sum of the terms of degree <= ``r``."""
        return Series._raw(self.nvars, self.trunc, {w: c for w, c in self._terms.items() if len(w) <= r})

    def truncate(self, level: int) -> Series:
        """Reinterpret in F/m^(level+1) (level may exceed the current one)."""
        if level >= self.trunc:
            return Series._raw(self.nvars, level, self._terms)
        return Series._raw(self.nvars, level, {w: c for w, c in self._terms.items() if len(w) <= level})


def default_names(nvars: int) -> list[str]:
    if nvars <= 3:
        return ["x", "y", "z"][:nvars]
    return [f"x{i + 1}" for i in range(nvars)]


def gens(nvars: int, trunc: int = DEFAULT_TRUNC) -> list[Series]:
    return [Series.gen(i, nvars, trunc) for i in range(nvars)]


class Endomorphism:
    """Continuous algebra endomorphism x_i -> images[i] (images in m)."""

    __slots__ = ("nvars", "trunc", "images", "_buckets")

    def __init__(self, images: Sequence[Series]):
        images = tuple(images)
        if not images:
            raise ValueError("an endomorphism needs at least one image")
        n, N = images[0].nvars, images[0].trunc
        if len(images) != n:
            raise ValueError(f"expected {n} images, got {len(images)}")
        for g in images:
            if g.nvars != n or g.trunc != N:
                raise TruncMismatch("images disagree on nvars/trunc")
            if not g.in_max_ideal():
                raise ValueError("images must lie in the maximal ideal (no constant term)")
        self.nvars = n
        self.trunc = N
        self.images = images
        self._buckets = None

    @classmethod
    def identity(cls, nvars: int, trunc: int = DEFAULT_TRUNC) -> Endomorphism:
        return cls(gens(nvars, trunc))

    @classmethod
    def linear(cls, matrix: RatMatrix, trunc: int = DEFAULT_TRUNC) -> Endomorphism:
        """x_j -> sum_i matrix[i, j] x_i (columns are images)."""
        n = matrix.rows
        return cls([Series(n, trunc, {(i,): matrix[i, j] for i in range(n)}) for j in range(n)])

    def _images_bucketed(self) -> list[list[list]]:
        if self._buckets is None:
            self._buckets = [_by_degree(g._terms, self.trunc) for g in self.images]
        return self._buckets

    def __eq__(self, other) -> bool:
        return isinstance(other, Endomorphism) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        names = default_names(self.nvars)
        body = ", ".join(f"{v} -> {g.to_str(names)}" for v, g in zip(names, self.images))
        return f"Endomorphism({body}; trunc={self.trunc})"

    def __call__(self, f: Series) -> Series:
        return substitute(self, f)

    def linear_matrix(self) -> RatMatrix:
        return RatMatrix.from_columns([g.linear_coeffs() for g in self.images])

    def is_automorphism(self) -> bool:
        m = self.linear_matrix()
        return m.rank() == m.rows

    def truncate(self, level: int) -> Endomorphism:
        return Endomorphism([g.truncate(level) for g in self.images])

    def compose(self, other: Endomorphism) -> Endomorphism:
        return compose(self, other)

    def is_identity(self) -> bool:
        return all(g._terms == {(i,): 1} for i, g in enumerate(self.images))


def _check_pair(a, b) -> None:
    if a.nvars != b.nvars or a.trunc != b.trunc:
        raise TruncMismatch(f"operands differ: (n={a.nvars}, N={a.trunc}) vs (n={b.nvars}, N={b.trunc})")


def substitute(h: Endomorphism, f: Series) -> Series:
    """H(f): every x_i replaced by H(x_i), products kept in word order."""
    _check_pair(h, f)
    return Series._raw(f.nvars, f.trunc, substitute_terms(f._terms, h._images_bucketed(), f.trunc))


def compose(h: Endomorphism, g: Endomorphism) -> Endomorphism:
    """(H o G)(x_i) = H(G(x_i))."""
    _check_pair(h, g)
    return Endomorphism([substitute(h, gi) for gi in g.images])


def invert(h: Endomorphism) -> Endomorphism:
    """Two-sided inverse modulo m^(N+1) (formal inverse function theorem).

    The linear part is inverted exactly; then for each degree d the
    degree-d discrepancy E of H o G is removed by G_i -= L^-1(E_i), where
    L^-1 acts letterwise, which is exactly the degree-d effect of H on a
    homogeneous correction.
    """
    n, N = h.nvars, h.trunc
    lin = h.linear_matrix()
    try:
        lin_inv = lin.inverse()
    except ZeroDivisionError:
        raise NotAutomorphism("linear part is singular") from None
    g_lin = Endomorphism.linear(lin_inv, N)
    g_lin_b = g_lin._images_bucketed()
    g = [dict(img._terms) for img in g_lin.images]
    for d in range(2, N + 1):
        hd = [_by_degree(t, d) for t in (img._terms for img in h.images)]
        for i in range(n):
            comp = substitute_terms(g[i], hd, d)
            err = {w: c for w, c in comp.items() if len(w) == d}
            if not err:
                continue
            corr = substitute_terms(err, g_lin_b, d)
            for w, c in corr.items():
                v = g[i].get(w, 0) - c
                if v:
                    g[i][w] = v
                else:
                    g[i].pop(w, None)
    return Endomorphism([Series._raw(n, N, gi) for gi in g])
