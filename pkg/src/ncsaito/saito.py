"""The Saito pipeline: Euler field, weights, normal form, uniqueness checks.

For a quasi-homogeneous superpotential Phi (with finite-dimensional Jacobi
algebra) one solves Phi_#(xi) = Phi for a derivation xi, splits xi into
semisimple and nilpotent parts, and reads the weights off the eigenvalues
of the semisimple part.  The conjugator that diagonalizes xi_S carries Phi
to a weighted-homogeneous representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .cyclic import Superpotential, apply_derivation, canonical_terms, canonicalize, jacobi_generators, order
from .derive import Derivation, JCDecomposition, adjoint, jordan_chevalley, simultaneous_diagonalize, word_weight
from .errors import (
    Inconsistent,
    NotEulerField,
    NotQuasiHomogeneous,
    OrderTooLow,
    UniquenessViolated,
    WeightOutOfRange,
    ZeroPotential,
)
from .exactlin import RatMatrix, SparseEchelon
from .jacobi import DEFAULT_NMAX, DEFAULT_SIZE_GUARD, JacobiReport, _require_finite, is_quasi_homogeneous
from .ncseries import Endomorphism, Series, substitute, word_key, words_of_degree
from .rational import Q, to_q


@dataclass(frozen=True)
class WeightType:
    """Weights (r_1, ..., r_n), one per generator, in generator order."""

    weights: tuple[Q, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(to_q(r) for r in self.weights))

    @property
    def canonical(self) -> WeightType:
        return WeightType(tuple(sorted(self.weights)))

    def __iter__(self) -> Iterator[Q]:
        return iter(self.weights)

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, i: int) -> Q:
        return self.weights[i]


@dataclass(frozen=True)
class NormalizationResult:
    type: WeightType
    transform: Endomorphism
    normal_form: Superpotential
    euler: Derivation
    jc: JCDecomposition


def _canon(phi) -> Superpotential:
    return phi if isinstance(phi, Superpotential) else canonicalize(phi)


def _weights_tuple(r) -> tuple[Q, ...]:
    return r.weights if isinstance(r, WeightType) else tuple(to_q(x) for x in r)


def is_weighted_homogeneous(phi: Superpotential, r: WeightType | Sequence) -> bool:
    """Every word of the canonical representative has weight exactly 1."""
    phi = _canon(phi)
    ws = _weights_tuple(r)
    if len(ws) != phi.nvars:
        raise ValueError("one weight per generator is required")
    return all(word_weight(w, ws) == 1 for w in phi.rep.terms)


def canonical_type(r: WeightType | Sequence) -> WeightType:
    return WeightType(_weights_tuple(r)).canonical


def euler_solve(
    phi: Superpotential,
    report: JacobiReport | None = None,
    nmax: int = DEFAULT_NMAX,
    size_guard: int = DEFAULT_SIZE_GUARD,
) -> Derivation:
    """A derivation xi with Phi_#(xi) = Phi modulo m^(N+1), N the truncation.

    Unknowns are the coefficients of g_i = xi(x_i) on words of degree
    1..N - ord(D_i Phi) (higher terms cannot reach degree N).  The system
    pi(sum_i g_i D_i Phi) = Phi is solved in necklace coordinates; among
    the solutions, the echelon one built from the lowest-degree unknowns is
    returned.
    """
    phi = _canon(phi)
    if phi.is_zero():
        raise ZeroPotential("the zero superpotential has no Euler field")
    report = _require_finite(phi, report, nmax, size_guard)
    if not is_quasi_homogeneous(phi, report, nmax, size_guard):
        raise NotQuasiHomogeneous("[Phi] is nonzero in HH_0 of its Jacobi algebra")
    n, N = phi.nvars, phi.trunc
    gens = jacobi_generators(phi)
    reach = [N - g.order() if not g.is_zero() else 0 for g in gens]
    ech = SparseEchelon(key=word_key, track=True)
    for d in range(1, max(reach) + 1):
        for i, g in enumerate(gens):
            if d > reach[i]:
                continue
            gt = g._terms
            for u in words_of_degree(n, d):
                row = {u + w: c for w, c in gt.items() if d + len(w) <= N}
                ech.add(canonical_terms(row), (i, u))
    try:
        combo = ech.express(dict(phi.rep._terms))
    except Inconsistent:
        raise NotQuasiHomogeneous(f"Phi_#(xi) = Phi has no solution modulo m^{N + 1}") from None
    images: list[dict] = [{} for _ in range(n)]
    for (i, u), c in combo.items():
        images[i][u] = c
    xi = Derivation([Series(n, N, t) for t in images])
    if apply_derivation(xi, phi) != phi:
        raise Inconsistent("Euler field failed its post-check")
    return xi


def _pipeline(phi, report, nmax, size_guard) -> tuple[Superpotential, Derivation, JCDecomposition]:
    phi = _canon(phi)
    xi = euler_solve(phi, report, nmax, size_guard)
    jc = jordan_chevalley(xi)
    if apply_derivation(jc.semisimple, phi) != phi:
        raise Inconsistent("semisimple part does not fix Phi")
    if not apply_derivation(jc.nilpotent, phi).is_zero():
        raise Inconsistent("nilpotent part does not annihilate Phi")
    bad = [r for r in jc.eigenvalues if not 0 < r < Q(1, 2)]
    if bad:
        raise WeightOutOfRange(f"weights {[str(r) for r in jc.eigenvalues]} leave the interval (0, 1/2)")
    return phi, xi, jc


def weights(
    phi: Superpotential,
    report: JacobiReport | None = None,
    nmax: int = DEFAULT_NMAX,
    size_guard: int = DEFAULT_SIZE_GUARD,
) -> WeightType:
    """Eigenvalues of the semisimple part of an Euler field of Phi."""
    return WeightType(_pipeline(phi, report, nmax, size_guard)[2].eigenvalues)


def normalize(
    phi: Superpotential,
    report: JacobiReport | None = None,
    nmax: int = DEFAULT_NMAX,
    size_guard: int = DEFAULT_SIZE_GUARD,
) -> NormalizationResult:
    """Automorphism H with H(Phi) weighted homogeneous of the extracted type."""
    phi, xi, jc = _pipeline(phi, report, nmax, size_guard)
    h = jc.conjugator
    wt = WeightType(jc.eigenvalues)
    if adjoint(h, jc.semisimple, inverse=jc.conjugator_inverse) != jc.diagonal:
        raise Inconsistent("conjugator does not diagonalize the semisimple part")
    normal = canonicalize(substitute(h, phi.rep))
    if not is_weighted_homogeneous(normal, wt):
        raise Inconsistent("normal form is not weighted homogeneous")
    return NormalizationResult(wt, h, normal, xi, jc)


def uniqueness_matrix(phi: Superpotential) -> tuple[RatMatrix, list[tuple]]:
    """The integer matrix A certifying that a diagonal Euler field is unique.

    Row i comes from the first word of the canonical representative that
    is x_i^a (a >= 3), giving a*e_i, or a rotation of x_i^b x_p x_i^c with
    b + c >= 2, giving (b+c)*e_i + e_p.
    """
    phi = _canon(phi)
    n = phi.nvars
    words = [w for w, _ in phi.rep.sorted_terms()]
    rows, chosen = [], []
    for i in range(n):
        for w in words:
            others = [p for p in w if p != i]
            if len(w) >= 3 and not others:
                row = [0] * n
                row[i] = len(w)
            elif len(others) == 1 and len(w) >= 3:
                row = [0] * n
                row[i] = len(w) - 1
                row[others[0]] = 1
            else:
                continue
            rows.append(row)
            chosen.append(w)
            break
        else:
            raise UniquenessViolated(f"no admissible monomial for generator {i + 1}")
    return RatMatrix(rows), chosen


def semisimple_uniqueness_check(
    phi: Superpotential,
    xi: Derivation,
    eta: Derivation,
    report: JacobiReport | None = None,
    nmax: int = DEFAULT_NMAX,
    size_guard: int = DEFAULT_SIZE_GUARD,
    diagnostic: bool = False,
):
    """Confirm xi == eta for commuting semisimple Euler fields of Phi.

    Non-diagonal inputs are first brought to diagonal form together.
    Returns True, or (True, A) with ``diagnostic``; raises
    `UniquenessViolated` when the fields differ.
    """
    phi = _canon(phi)
    if order(phi) < 3:
        raise OrderTooLow("uniqueness needs a superpotential of order >= 3")
    _require_finite(phi, report, nmax, size_guard)
    for name, z in (("xi", xi), ("eta", eta)):
        if apply_derivation(z, phi) != phi:
            raise NotEulerField(f"{name} does not satisfy Phi_#({name}) = Phi")
    if xi.is_diagonal() and eta.is_diagonal():
        phi_d, xi_d, eta_d = phi, xi, eta
    else:
        h = simultaneous_diagonalize([xi, eta])
        xi_d, eta_d = adjoint(h, xi), adjoint(h, eta)
        phi_d = canonicalize(substitute(h, phi.rep))
    a, _ = uniqueness_matrix(phi_d)
    for i in range(a.rows):
        if a[i, i] <= sum(a[i, p] for p in range(a.cols) if p != i):
            raise UniquenessViolated(f"row {i + 1} of A is not strictly diagonally dominant")
    r, s = xi_d.diagonal_weights(), eta_d.diagonal_weights()
    if a.apply(r) != a.apply(s) or r != s or xi != eta:
        raise UniquenessViolated("two semisimple Euler fields differ")
    return (True, a) if diagnostic else True


@dataclass(frozen=True)
class CommPoly:
    """Truncated commutative polynomial: exponent tuple -> coefficient."""

    nvars: int
    trunc: int
    terms: dict

    def __post_init__(self):
        clean = {tuple(e): to_q(c) for e, c in self.terms.items() if c and sum(e) <= self.trunc}
        object.__setattr__(self, "terms", clean)

    def __eq__(self, other) -> bool:
        return isinstance(other, CommPoly) and (self.nvars, self.trunc, self.terms) == (
            other.nvars,
            other.trunc,
            other.terms,
        )

    def __hash__(self) -> int:
        return hash((self.nvars, self.trunc, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[tuple, Q]]:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-e for e in t[0])))

    def is_weighted_homogeneous(self, r: WeightType | Sequence) -> bool:
        ws = _weights_tuple(r)
        return all(sum(e * w for e, w in zip(exps, ws)) == 1 for exps in self.terms)

    def to_str(self, names: Sequence[str]) -> str:
        from .expr import format_rational

        items = self.sorted_terms()
        if not items:
            return "0"
        out = []
        for k, (exps, c) in enumerate(items):
            mono = "*".join(names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(exps) if e)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = format_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rational(a)}*{mono}"
            if k == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)


def abelianize(phi: Superpotential | Series) -> CommPoly:
    """Image under x_i -> commuting x_i (independent of the representative)."""
    f = phi.rep if isinstance(phi, Superpotential) else phi
    terms: dict = {}
    for w, c in f.terms.items():
        exps = [0] * f.nvars
        for i in w:
            exps[i] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + c
    return CommPoly(f.nvars, f.trunc, terms)
