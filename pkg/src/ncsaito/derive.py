"""Derivations of the truncated free algebra that preserve m.

Besides the Lie-algebra basics this module holds the two constructive
results everything else rests on: the Jordan-Chevalley splitting of a
derivation into commuting semisimple and nilpotent parts, built degree by
degree from the Jordan form of its linear part, and the simultaneous
diagonalization of commuting semisimple derivations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .rational import Q
from .errors import NotCommuting, NotDiagonal, NotPrinciple, NotSemisimple, TruncMismatch
from .exactlin import RatMatrix, rational_jordan_form
from .ncseries import (
    Endomorphism,
    Series,
    _by_degree,
    derive_terms,
    derive_terms_at,
    shift_terms,
    substitute_terms,
    _check_pair,
    compose,
    invert,
)


class Derivation:
    """Derivation x_i -> images[i]; every image lies in m."""

    __slots__ = ("nvars", "trunc", "images", "_buckets")

    def __init__(self, images: Sequence[Series]):
        images = tuple(images)
        if not images:
            raise ValueError("a derivation needs at least one image")
        n, N = images[0].nvars, images[0].trunc
        if len(images) != n:
            raise ValueError(f"expected {n} images, got {len(images)}")
        for g in images:
            if g.nvars != n or g.trunc != N:
                raise TruncMismatch("images disagree on nvars/trunc")
            if not g.in_max_ideal():
                raise ValueError("derivation images must lie in the maximal ideal")
        self.nvars = n
        self.trunc = N
        self.images = images
        self._buckets = None

    @classmethod
    def zero(cls, nvars: int, trunc: int) -> Derivation:
        return cls([Series.zero(nvars, trunc)] * nvars)

    @classmethod
    def diagonal(cls, weights: Sequence, trunc: int) -> Derivation:
        n = len(weights)
        return cls([Series(n, trunc, {(i,): w}) for i, w in enumerate(weights)])

    @classmethod
    def linear(cls, matrix: RatMatrix, trunc: int) -> Derivation:
        """x_j -> sum_i matrix[i, j] x_i."""
        n = matrix.rows
        return cls([Series(n, trunc, {(i,): matrix[i, j] for i in range(n)}) for j in range(n)])

    def _images_bucketed(self):
        if self._buckets is None:
            self._buckets = [_by_degree(g._terms, self.trunc) for g in self.images]
        return self._buckets

    def __call__(self, f: Series) -> Series:
        return apply(self, f)

    def __eq__(self, other) -> bool:
        return isinstance(other, Derivation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(("der", self.images))

    def __repr__(self) -> str:
        from .ncseries import default_names

        names = default_names(self.nvars)
        body = ", ".join(f"{v} -> {g.to_str(names)}" for v, g in zip(names, self.images))
        return f"Derivation({body}; trunc={self.trunc})"

    def __add__(self, other: Derivation) -> Derivation:
        _check_pair(self, other)
        return Derivation([a + b for a, b in zip(self.images, other.images)])

    def __sub__(self, other: Derivation) -> Derivation:
        _check_pair(self, other)
        return Derivation([a - b for a, b in zip(self.images, other.images)])

    def __neg__(self) -> Derivation:
        return Derivation([-a for a in self.images])

    def scale(self, c) -> Derivation:
        return Derivation([a.scale(c) for a in self.images])

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.images)

    def truncate(self, level: int) -> Derivation:
        return Derivation([g.truncate(level) for g in self.images])

    def linear_matrix(self) -> RatMatrix:
        """Matrix of the induced map on m/m^2 (column j = image of x_j)."""
        return RatMatrix.from_columns([g.linear_coeffs() for g in self.images])

    def principal_part(self) -> Derivation:
        """The degree-1 part: x_i -> xi(x_i)_(1)."""
        return Derivation([g.homogeneous_part(1) for g in self.images])

    def is_principle(self) -> bool:
        return all(g.is_homogeneous(1) for g in self.images)

    def is_diagonal(self) -> bool:
        return all(set(g.terms) <= {(i,)} for i, g in enumerate(self.images))

    def diagonal_weights(self) -> tuple[Q, ...]:
        if not self.is_diagonal():
            raise NotDiagonal("derivation does not have the generators as eigenvectors")
        return tuple(g.coeff((i,)) for i, g in enumerate(self.images))

    def is_linearly_nilpotent(self) -> bool:
        m = self.linear_matrix()
        return m.power(self.nvars).is_zero()


def apply(xi: Derivation, f: Series) -> Series:
    """xi(f) by the Leibniz rule xi(ab) = xi(a) b + a xi(b)."""
    _check_pair(xi, f)
    return Series._raw(f.nvars, f.trunc, derive_terms(f._terms, xi._images_bucketed(), f.trunc))


def bracket(xi: Derivation, eta: Derivation) -> Derivation:
    """[xi, eta](x_i) = xi(eta(x_i)) - eta(xi(x_i))."""
    _check_pair(xi, eta)
    return Derivation([apply(xi, b) - apply(eta, a) for a, b in zip(xi.images, eta.images)])


def adjoint(h: Endomorphism, xi: Derivation, inverse: Endomorphism | None = None) -> Derivation:
    """Ad_H xi = H o xi o H^-1."""
    _check_pair(h, xi)
    hinv = inverse if inverse is not None else invert(h)
    return Derivation([h(apply(xi, g)) for g in hinv.images])


def word_weight(w, weights: Sequence[Q]) -> Q:
    return sum((weights[i] for i in w), Q(0))


def eigen_develop(f: Series, xi: Derivation) -> dict[Q, Series]:
    """Split f into eigenvectors of a diagonal derivation, keyed by eigenvalue."""
    weights = xi.diagonal_weights()
    parts: dict[Q, dict] = {}
    for w, c in f.terms.items():
        parts.setdefault(word_weight(w, weights), {})[w] = c
    return {a: Series._raw(f.nvars, f.trunc, parts[a]) for a in sorted(parts)}


def _check_split(semisimple: Derivation, nilpotent: Derivation) -> None:
    if not (semisimple.is_principle() and nilpotent.is_principle()):
        raise NotPrinciple("graded solve needs derivations with homogeneous linear images")
    if not semisimple.is_diagonal():
        raise NotDiagonal("semisimple part must be diagonal on the generators")
    a = semisimple.linear_matrix()
    b = nilpotent.linear_matrix()
    if a @ b != b @ a:
        raise NotCommuting("semisimple and nilpotent parts do not commute")


def graded_solve(
    semisimple: Derivation, nilpotent: Derivation, f: Series, b, *, check: bool = True
) -> tuple[Series, Series]:
    """Solve ``(xi - b) h - f = residue`` in one degree, xi = semisimple + nilpotent.

    On each eigenspace of ``semisimple`` with eigenvalue c != b the operator
    (c - b) + nilpotent is inverted by its finite Neumann series; the
    eigenvalue-b component of f cannot be reached and comes back as
    ``-residue``.
    """
    if check:
        _check_split(semisimple, nilpotent)
    if not f.is_homogeneous():
        raise ValueError("graded_solve expects a homogeneous series")
    b = Q(b)
    h = Series.zero(f.nvars, f.trunc)
    residue = Series.zero(f.nvars, f.trunc)
    for c, fc in eigen_develop(f, semisimple).items():
        if c == b:
            residue = residue - fc
            continue
        inv = 1 / (c - b)
        term = fc.scale(inv)
        acc = term
        sign = -1
        while True:
            term = apply(nilpotent, term).scale(inv)
            if term.is_zero():
                break
            acc = acc + term.scale(sign)
            sign = -sign
        h = h + acc
    return h, residue


@dataclass(frozen=True)
class JCDecomposition:
    semisimple: Derivation
    nilpotent: Derivation
    conjugator: Endomorphism  # Ad_conjugator(semisimple) is diagonal
    eigenvalues: tuple[Q, ...]

    @property
    def diagonal(self) -> Derivation:
        return Derivation.diagonal(self.eigenvalues, self.semisimple.trunc)

    @cached_property
    def conjugator_inverse(self) -> Endomorphism:
        return invert(self.conjugator)


def jordan_chevalley(xi: Derivation) -> JCDecomposition:
    """Split xi = xi_S + xi_N (semisimple + nilpotent, commuting).

    1. A linear automorphism T puts the linear part in upper Jordan form:
       xi0 = Ad_T xi has xi0(x_i)_(1) = a_i x_i (+ x_{i-1} inside a block).
    2. For s = 2..N, H^(s): x_j -> x_j + h_j is chosen with graded_solve so
       that the degree-s parts of eta = Ad_{H^(s)...H^(2)} xi0 become
       eigenvectors of the diagonal part; inside a Jordan block the solve
       for x_i also absorbs h_{i-1}.
    3. With H the full composite, xi_S = Ad_{H^-1} diag(a), xi_N = xi - xi_S.

    eta is never conjugated explicitly.  With g the running composite and
    g_i = x_i + r_i, the relation eta(g_i) = xi0(x_i)(g) determines
    eta(x_i) one degree at a time, since r_i lies in m^2.
    """
    n, N = xi.nvars, xi.trunc
    jd = rational_jordan_form(xi.linear_matrix())
    p = jd.transform
    t = Endomorphism.linear(p.inverse(), N)
    tinv = Endomorphism.linear(p, N)
    xi0 = adjoint(t, xi, inverse=tinv)
    a = jd.eigenvalues()
    starts = jd.block_starts()
    diag = Derivation.diagonal(a, N)
    lin = xi0.principal_part()
    nil = lin - diag
    lin_b = lin._images_bucketed()

    g = [{(i,): Q(1)} for i in range(n)]
    eta = [dict(img.homogeneous_part(1)._terms) for img in xi0.images]
    for s in range(2, N + 1):
        eta_b = [_by_degree(e, s - 1) for e in eta]
        g_b = [_by_degree(gi, s) for gi in g]
        hs: list[Series] = []
        for i in range(n):
            r = {w: c for w, c in g[i].items() if 2 <= len(w) <= s}
            drift = derive_terms_at(r, eta_b, s)
            src = {w: c for w, c in xi0.images[i]._terms.items() if len(w) <= s}
            pre = {w: c for w, c in substitute_terms(src, g_b, s).items() if len(w) == s}
            for w, c in drift.items():
                pre[w] = pre.get(w, 0) - c
            _drop_zeros(pre)
            target = Series._raw(n, N, pre)
            if not starts[i]:
                target = target + hs[i - 1]
            h_i, _ = graded_solve(diag, nil, target, a[i], check=(i == 0))
            hs.append(h_i)
            eta[i].update(pre)
        if all(h.is_zero() for h in hs):
            continue
        hs_b = [_by_degree(h._terms, N) for h in hs]
        for i in range(n):
            # degree-s part after the step: pre + xi0_lin(x_i)(h) - lin(h_i)
            extra = substitute_terms(lin.images[i]._terms, hs_b, N)
            back = derive_terms_at(hs[i]._terms, lin_b, s)
            for w in set(extra) | set(back):
                if len(w) == s:
                    eta[i][w] = eta[i].get(w, 0) + extra.get(w, 0) - back.get(w, 0)
            _drop_zeros(eta[i])
        # g <- step o g, i.e. g_i(x + h)
        for d in g:
            for w, c in shift_terms(d, hs_b, s, N).items():
                v = d.get(w, 0) + c
                if v:
                    d[w] = v
                else:
                    d.pop(w, None)

    # eta = diag + nu0 at this point.  The nilpotent part nu of xi0 solves
    # nu_i(g) = nu0(g_i) degree by degree (linear in nu_i, so it is
    # accumulated as terms land); it is zero or sparse in the typical case.
    nu0 = [{w: c for w, c in e.items() if w != (i,) or c != a[i]} for i, e in enumerate(eta)]
    g_map = Endomorphism([Series._raw(n, N, gi) for gi in g])
    g_b = g_map._images_bucketed()
    nu0_b = [_by_degree(e, N) for e in nu0]
    sigma: list[Series] = []
    for i in range(n):
        want = derive_terms(g[i], nu0_b, N) if any(nu0) else {}
        ni: dict = {}
        known: dict = {}
        for d in range(1, N + 1):
            new_d = {}
            for w in set(want) | set(known):
                if len(w) == d:
                    v = want.get(w, 0) - known.get(w, 0)
                    if v:
                        new_d[w] = v
            if not new_d:
                continue
            ni.update(new_d)
            for w, c in substitute_terms(new_d, g_b, N).items():
                known[w] = known.get(w, 0) + c
        sigma.append(xi0.images[i] - Series._raw(n, N, ni))
    sigma_d = Derivation(sigma)
    h_full = compose(g_map, t)
    xs = adjoint(tinv, sigma_d, inverse=t)
    return JCDecomposition(xs, xi - xs, h_full, a)


def _drop_zeros(d: dict) -> None:
    for w in [w for w, c in d.items() if not c]:
        del d[w]


def is_semisimple(xi: Derivation) -> bool:
    """Operational test: the nilpotent part vanishes modulo m^(N+1)."""
    return jordan_chevalley(xi).nilpotent.is_zero()


def _tuple_weight(w, tuples: Sequence[tuple]) -> tuple:
    width = len(tuples[0])
    return tuple(sum((tuples[k][j] for k in w), Q(0)) for j in range(width))


def simultaneous_diagonalize(zetas: Sequence[Derivation]) -> Endomorphism:
    """Automorphism H with every Ad_H zeta_j diagonal on the generators.

    Induction on the number of derivations: once zeta_1..zeta_p are
    diagonal, eigenvectors f_k of zeta_{p+1} are split by the weight tuples
    of zeta_1..zeta_p, and from each weight class the components (f_k)_w
    whose linear parts span that class's generators become the new
    generators.
    """
    zetas = list(zetas)
    if not zetas:
        raise ValueError("need at least one derivation")
    n, N = zetas[0].nvars, zetas[0].trunc
    for z in zetas[1:]:
        _check_pair(z, zetas[0])
    for i, z in enumerate(zetas):
        for w in zetas[i + 1:]:
            if not bracket(z, w).is_zero():
                raise NotCommuting("derivations do not commute")

    h = Endomorphism.identity(n, N)
    hinv = Endomorphism.identity(n, N)
    for p, zeta in enumerate(zetas):
        cur = adjoint(h, zeta, inverse=hinv)
        jc = jordan_chevalley(cur)
        if not jc.nilpotent.is_zero():
            raise NotSemisimple(f"derivation #{p + 1} has a nonzero nilpotent part")
        if p == 0:
            h = compose(jc.conjugator, h)
            hinv = compose(hinv, jc.conjugator_inverse)
            continue
        done = [adjoint(h, z, inverse=hinv).diagonal_weights() for z in zetas[:p]]
        tuples = [tuple(ws[i] for ws in done) for i in range(n)]
        eigvecs = jc.conjugator_inverse.images  # cur(f_k) = a_k f_k
        new_images: list[Series | None] = [None] * n
        for wt in dict.fromkeys(tuples):
            members = [i for i in range(n) if tuples[i] == wt]
            picked: list[Series] = []
            basis: list[tuple] = []
            for f in eigvecs:
                comp = Series._raw(n, N, {w: c for w, c in f.terms.items() if _tuple_weight(w, tuples) == wt})
                lin = tuple(comp.coeff((i,)) for i in members)
                if any(comp.coeff((i,)) for i in range(n) if i not in members):
                    raise AssertionError("weight component leaks outside its class")
                if RatMatrix.from_columns(basis + [lin]).rank() > len(basis):
                    basis.append(lin)
                    picked.append(comp)
                if len(picked) == len(members):
                    break
            for i, comp in zip(members, picked):
                new_images[i] = comp
        tmap = Endomorphism(new_images)
        tinv = invert(tmap)
        h = compose(tinv, h)
        hinv = compose(hinv, tmap)
    return h
