"""Exact linear algebra over the rationals.

Dense matrices (`RatMatrix`) carry the small linear-part computations
(characteristic polynomials, Jordan forms of n x n matrices).  The large
span computations over word bases use `SparseEchelon`, an incremental
sparse row reducer keyed by an arbitrary totally ordered column type.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd
from typing import Callable, Hashable, Iterable, Sequence

from .rational import Q, to_q
from .errors import Inconsistent, NonRationalSpectrum

__all__ = [
    "RatMatrix",
    "JordanData",
    "rref",
    "solve",
    "kernel",
    "charpoly",
    "rational_roots",
    "rational_jordan_form",
    "SparseEchelon",
]


def _q(x) -> Q:
    return x if type(x) is Q else to_q(x)


class RatMatrix:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, entries: Iterable[Iterable]):
        data = tuple(tuple(_q(x) for x in row) for row in entries)
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        self._data = data
        self.rows = len(data)
        self.cols = ncols

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RatMatrix:
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> RatMatrix:
        if not columns:
            return cls([])
        return cls(list(zip(*columns)))

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[Q, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[Q, ...]:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Q]]:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMatrix) and self._data == other._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"RatMatrix([{body}])"

    def __add__(self, other: RatMatrix) -> RatMatrix:
        return RatMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        return RatMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def scale(self, c) -> RatMatrix:
        c = _q(c)
        return RatMatrix([[c * a for a in r] for r in self._data])

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = [other.column(j) for j in range(other.cols)]
        return RatMatrix([[sum((a * b for a, b in zip(r, c)), Q(0)) for c in cols] for r in self._data])

    def apply(self, v: Sequence) -> tuple[Q, ...]:
        return tuple(sum((a * _q(b) for a, b in zip(r, v)), Q(0)) for r in self._data)

    def transpose(self) -> RatMatrix:
        return RatMatrix(list(zip(*self._data)) if self._data else [])

    def power(self, k: int) -> RatMatrix:
        out = RatMatrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, r in enumerate(self._data) for j, x in enumerate(r) if i != j)

    def rank(self) -> int:
        return len(rref(self)[1])

    def inverse(self) -> RatMatrix:
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        aug = RatMatrix([list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self._data)])
        red, piv = rref(aug)
        if piv[:n] != tuple(range(n)):
            raise ZeroDivisionError("singular matrix")
        return RatMatrix([red.row(i)[n:] for i in range(n)])


def rref(m: RatMatrix) -> tuple[RatMatrix, tuple[int, ...]]:
    """Reduced row-echelon form and the pivot columns.

    Pivot choice is the first nonzero entry in the column (no randomness),
    so results are reproducible.
    """
    a = [list(r) for r in m.tolist()]
    rows, cols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return RatMatrix(a) if rows else m, tuple(pivots)


def solve(m: RatMatrix, b: Sequence) -> tuple[Q, ...]:
    """Solve ``m x = b`` exactly; free variables are set to zero."""
    if len(b) != m.rows:
        raise ValueError("shape mismatch")
    aug = RatMatrix([list(r) + [b_i] for r, b_i in zip(m.tolist(), b)])
    red, piv = rref(aug)
    if piv and piv[-1] == m.cols:
        raise Inconsistent("right-hand side is not in the column space")
    x = [Q(0)] * m.cols
    for i, c in enumerate(piv):
        x[c] = red[i, m.cols]
    return tuple(x)


def kernel(m: RatMatrix) -> list[tuple[Q, ...]]:
    """Basis of the null space; the vector for free column j has a 1 at j."""
    red, piv = rref(m)
    free = [j for j in range(m.cols) if j not in piv]
    basis = []
    for j in free:
        v = [Q(0)] * m.cols
        v[j] = Q(1)
        for i, c in enumerate(piv):
            v[c] = -red[i, j]
        basis.append(tuple(v))
    return basis


def charpoly(m: RatMatrix) -> tuple[Q, ...]:
    """Coefficients of det(t I - m), leading coefficient first.

    Berkowitz's algorithm: division free, so the only arithmetic is ring
    arithmetic on the entries.
    """
    n = m.rows
    if n != m.cols:
        raise ValueError("charpoly of a non-square matrix")
    if n == 0:
        return (Q(1),)
    a = m.tolist()
    c = [Q(1), -a[0][0]]
    for r in range(1, n):
        row = a[r][:r]
        col = [a[i][r] for i in range(r)]
        sub = [a[i][:r] for i in range(r)]
        t = [Q(1), -a[r][r]]
        v = col
        for _ in range(r):
            t.append(-sum((x * y for x, y in zip(row, v)), Q(0)))
            v = [sum((s * y for s, y in zip(srow, v)), Q(0)) for srow in sub]
        new = []
        for i in range(r + 2):
            new.append(sum((t[i - j] * c[j] for j in range(min(i, r) + 1) if i - j < len(t)), Q(0)))
        c = new
    return tuple(c)


def _divisors(k: int) -> list[int]:
    k = abs(k)
    out = []
    d = 1
    while d * d <= k:
        if k % d == 0:
            out.append(d)
            if d * d != k:
                out.append(k // d)
        d += 1
    return sorted(out)


def _poly_eval(p: Sequence[Q], x: Q) -> Q:
    acc = Q(0)
    for c in p:
        acc = acc * x + c
    return acc


def _deflate(p: list[Q], root: Q) -> list[Q]:
    out = [p[0]]
    for c in p[1:-1]:
        out.append(c + out[-1] * root)
    return out


def rational_roots(poly: Sequence) -> tuple[list[tuple[Q, int]], list[Q]]:
    """Rational roots (with multiplicity) of a polynomial, leading coefficient first.

    Returns ``(roots, remainder)`` where ``remainder`` is the cofactor with no
    rational roots left.  Candidates come from the rational root theorem.
    """
    p = [_q(c) for c in poly]
    while p and p[0] == 0:
        p.pop(0)
    roots: dict[Q, int] = {}
    while len(p) > 1 and p[-1] == 0:
        roots[Q(0)] = roots.get(Q(0), 0) + 1
        p.pop()
    if len(p) <= 1:
        return sorted(roots.items()), p
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    cands = sorted({Q(s * a, b) for a in _divisors(ints[-1]) for b in _divisors(ints[0]) for s in (1, -1)})
    for r in cands:
        while len(p) > 1 and _poly_eval(p, r) == 0:
            roots[r] = roots.get(r, 0) + 1
            p = _deflate(p, r)
    return sorted(roots.items()), p


@dataclass(frozen=True)
class JordanData:
    """``transform^-1 @ M @ transform`` is block diagonal with upper Jordan blocks."""

    transform: RatMatrix
    blocks: tuple[tuple[Q, int], ...]

    def jordan_matrix(self) -> RatMatrix:
        n = sum(s for _, s in self.blocks)
        a = [[Q(0)] * n for _ in range(n)]
        k = 0
        for lam, size in self.blocks:
            for i in range(size):
                a[k + i][k + i] = lam
                if i:
                    a[k + i - 1][k + i] = Q(1)
            k += size
        return RatMatrix(a)

    def eigenvalues(self) -> tuple[Q, ...]:
        return tuple(lam for lam, size in self.blocks for _ in range(size))

    def block_starts(self) -> tuple[bool, ...]:
        return tuple(i == 0 for _, size in self.blocks for i in range(size))


def _in_span(vecs: list[tuple], v: tuple) -> bool:
    if not vecs:
        return all(x == 0 for x in v)
    m = RatMatrix.from_columns(vecs)
    return RatMatrix.from_columns(vecs + [v]).rank() == m.rank()


def rational_jordan_form(m: RatMatrix) -> JordanData:
    """Jordan decomposition of a square matrix with rational spectrum."""
    n = m.rows
    if n != m.cols:
        raise ValueError("Jordan form of a non-square matrix")
    roots, rest = rational_roots(charpoly(m))
    if len(rest) > 1:
        raise NonRationalSpectrum("characteristic polynomial has an irreducible nonlinear rational factor")
    ident = RatMatrix.identity(n)
    chains: list[tuple[Q, list[tuple]]] = []
    for lam, mult in roots:
        nil = m - ident.scale(lam)
        kers = [[]]
        k = 1
        while len(kers[-1]) < mult:
            kers.append(kernel(nil.power(k)))
            k += 1
        found: list[list[tuple]] = []
        for j in range(len(kers) - 1, 0, -1):
            level = list(kers[j - 1])
            # vectors of existing chains sitting at level j
            for ch in found:
                if len(ch) >= j:
                    level.append(ch[j - 1])
            for v in kers[j]:
                if _in_span(level, v):
                    continue
                ch = [v]
                for _ in range(j - 1):
                    ch.insert(0, nil.apply(ch[0]))
                found.append(ch)
                level.append(v)
        for ch in found:
            chains.append((lam, ch))

    def first_nonzero(vec):
        return next(i for i, x in enumerate(vec) if x != 0)

    order = sorted(range(len(chains)), key=lambda i: first_nonzero(chains[i][1][0]))
    cols, blocks = [], []
    for i in order:
        lam, ch = chains[i]
        cols.extend(ch)
        blocks.append((lam, len(ch)))
    return JordanData(RatMatrix.from_columns(cols), tuple(blocks))


class SparseEchelon:
    """Incremental sparse row reduction over exact rationals.

    Rows are dicts ``column -> Q``.  The pivot of a row is its smallest
    column under ``key``; stored rows are normalized to pivot coefficient 1.
    With ``track=True`` every stored row also remembers which combination of
    inserted rows (by insertion label) produced it, which turns the reducer
    into a solver for ``target = sum c_j row_j``.
    """

    def __init__(self, key: Callable[[Hashable], object] = lambda c: c, track: bool = False):
        self.key = key
        self.track = track
        self.rows: dict[Hashable, dict] = {}
        self.combos: dict[Hashable, dict] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def __contains__(self, col) -> bool:
        return col in self.rows

    @property
    def pivots(self) -> list:
        return sorted(self.rows, key=self.key)

    def _reduce(self, row: dict, combo: dict | None, full: bool):
        key = self.key
        row = {c: v for c, v in row.items() if v}
        heap = [(key(c), c) for c in row]
        heapq.heapify(heap)
        seen = set()
        while heap:
            _, c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            v = row.get(c)
            if not v:
                row.pop(c, None)
                continue
            prow = self.rows.get(c)
            if prow is None:
                if not full:
                    return row, combo, c
                continue
            for c2, v2 in prow.items():
                nv = row.get(c2, 0) - v * v2
                if nv:
                    if c2 not in row and c2 not in seen:
                        heapq.heappush(heap, (key(c2), c2))
                    row[c2] = nv
                else:
                    row.pop(c2, None)
            if combo is not None:
                for l, w in self.combos[c].items():
                    nv = combo.get(l, 0) - v * w
                    if nv:
                        combo[l] = nv
                    else:
                        combo.pop(l, None)
        return row, combo, None

    def add(self, row: dict, label: Hashable = None) -> bool:
        """Insert a row; True when it enlarged the span."""
        combo = {label: Q(1)} if self.track else None
        row, combo, piv = self._reduce(row, combo, full=False)
        if piv is None:
            return False
        inv = 1 / row[piv]
        self.rows[piv] = {c: v * inv for c, v in row.items()}
        if self.track:
            self.combos[piv] = {l: w * inv for l, w in combo.items()}
        return True

    def reduce(self, row: dict) -> dict:
        """Fully reduced remainder of ``row`` (zero dict iff in the span)."""
        return self._reduce(row, None, full=True)[0]

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    def express(self, target: dict) -> dict:
        """Coefficients ``c`` with ``target = sum c[label] * row(label)``.

        Requires ``track=True``; raises `Inconsistent` if target is outside
        the span.
        """
        if not self.track:
            raise ValueError("express() needs a tracking reducer")
        row = {c: v for c, v in target.items() if v}
        combo: dict = {}
        key = self.key
        heap = [(key(c), c) for c in row]
        heapq.heapify(heap)
        seen = set()
        while heap:
            _, c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            v = row.get(c)
            if not v:
                continue
            prow = self.rows.get(c)
            if prow is None:
                raise Inconsistent("target is outside the span")
            for c2, v2 in prow.items():
                nv = row.get(c2, 0) - v * v2
                if c2 not in row and c2 not in seen:
                    heapq.heappush(heap, (key(c2), c2))
                row[c2] = nv
            for l, w in self.combos[c].items():
                combo[l] = combo.get(l, 0) + v * w
        return {l: w for l, w in combo.items() if w}

    def interreduce(self) -> None:
        """Bring stored rows to reduced echelon form (unique for the span)."""
        for piv in sorted(self.rows, key=self.key, reverse=True):
            row = self.rows[piv]
            tail = {c: v for c, v in row.items() if c != piv}
            combo = None
            if self.track:
                combo = dict(self.combos[piv])
            red, combo, _ = self._reduce(tail, combo, full=True)
            red[piv] = Q(1)
            self.rows[piv] = red
            if self.track:
                self.combos[piv] = combo
