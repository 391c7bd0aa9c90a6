"""Random generators and brute-force oracles shared by the test modules.

The oracles deliberately avoid the package's own kernels: products are
expanded with plain double loops, spans are compared through dense
`fractions.Fraction` elimination written here from scratch.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from math import gcd

from ncsaito.derive import Derivation
from ncsaito.ncseries import Endomorphism, Series


def fq(c) -> Fraction:
    """Plain Fraction with int parts, whatever rational type ``c`` is."""
    f = Fraction(c)
    return Fraction(int(f.numerator), int(f.denominator))


def words_upto(n: int, top: int, low: int = 0):
    for d in range(low, top + 1):
        yield from product(range(n), repeat=d)


# -- brute-force algebra ------------------------------------------------------


def naive_mul(a: dict, b: dict, level: int) -> dict:
    out: dict = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            if len(wa) + len(wb) <= level:
                out[wa + wb] = out.get(wa + wb, 0) + fq(ca) * fq(cb)
    return {w: c for w, c in out.items() if c}


def naive_substitute(images: list[dict], f: dict, level: int) -> dict:
    """f(images) by expanding every word as an explicit product."""
    out: dict = {}
    for w, c in f.items():
        acc = {(): fq(c)}
        for letter in w:
            acc = naive_mul(acc, images[letter], level)
        for u, a in acc.items():
            out[u] = out.get(u, 0) + a
    return {w: c for w, c in out.items() if c}


def naive_apply(images: list[dict], f: dict, level: int) -> dict:
    """Leibniz rule, one letter replaced at a time."""
    out: dict = {}
    for w, c in f.items():
        for p, letter in enumerate(w):
            for u, a in images[letter].items():
                key = w[:p] + u + w[p + 1:]
                if len(key) <= level:
                    out[key] = out.get(key, 0) + fq(c) * fq(a)
    return {w: c for w, c in out.items() if c}


def naive_standard(w: tuple) -> tuple:
    doubled = w + w
    return max((doubled[i:i + len(w)] for i in range(len(w))), default=w)


def naive_canonical(f: dict) -> dict:
    out: dict = {}
    for w, c in f.items():
        s = naive_standard(w)
        out[s] = out.get(s, 0) + fq(c)
    return {w: c for w, c in out.items() if c}


def naive_cyclic_derivative(f: dict, i: int) -> dict:
    """Sum over rotations of each word that start with x_i, first letter dropped."""
    out: dict = {}
    for w, c in f.items():
        for p in range(len(w)):
            rot = w[p:] + w[:p]
            if rot[0] == i:
                out[rot[1:]] = out.get(rot[1:], 0) + fq(c)
    return {w: c for w, c in out.items() if c}


# -- dense linear algebra oracle -----------------------------------------------


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for a in row:
        g = gcd(g, a)
    return [a // g for a in row] if g > 1 else row


def dense_rank(rows: list[dict]) -> int:
    """Rank of sparse rows by fraction-free Gaussian elimination.

    Rows are cleared of denominators and kept primitive, so entries stay
    small integers; nothing from the package's echelon code is used.
    """
    cols: dict = {}
    for r in rows:
        for w in r:
            cols.setdefault(w, len(cols))
    mat = []
    for r in rows:
        fr = {cols[w]: fq(c) for w, c in r.items() if c}
        if not fr:
            continue
        den = 1
        for c in fr.values():
            den = den * c.denominator // gcd(den, c.denominator)
        vec = [0] * len(cols)
        for j, c in fr.items():
            vec[j] = int(c * den)
        mat.append(_primitive(vec))
    rank = 0
    for j in range(len(cols)):
        piv = next((i for i in range(rank, len(mat)) if mat[i][j]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        top = mat[rank]
        p = top[j]
        for i in range(rank + 1, len(mat)):
            q = mat[i][j]
            if q:
                mat[i] = _primitive([p * a - q * b for a, b in zip(mat[i], top)])
        rank += 1
    return rank


def same_span(a: list[dict], b: list[dict]) -> bool:
    ra, rb = dense_rank(a), dense_rank(b)
    return ra == rb == dense_rank(a + b)


def in_span(rows: list[dict], target: dict) -> bool:
    return dense_rank(rows) == dense_rank(rows + [target])


def naive_ideal_rows(gens: list[dict], n: int, level: int) -> list[dict]:
    """All u*g*v truncated at ``level`` (no reduction)."""
    rows = []
    for g in gens:
        if not g:
            continue
        lo = min(len(w) for w in g)
        for u in words_upto(n, level - lo):
            for v in words_upto(n, level - lo - len(u)):
                row = {u + w + v: c for w, c in g.items() if len(u) + len(w) + len(v) <= level}
                if row:
                    rows.append(row)
    return rows


# -- random objects ----------------------------------------------------------


def rand_coeff(rng: random.Random, lo: int = -3, hi: int = 3, den: int = 2) -> Fraction:
    while True:
        c = Fraction(rng.randint(lo, hi), rng.randint(1, den))
        if c:
            return c


def rand_terms(rng: random.Random, n: int, mindeg: int, maxdeg: int, k: int) -> dict:
    t: dict = {}
    for _ in range(k):
        d = rng.randint(mindeg, maxdeg)
        w = tuple(rng.randrange(n) for _ in range(d))
        t[w] = rand_coeff(rng)
    return t


def rand_automorphism(rng: random.Random, n: int, trunc: int, maxdeg: int = 3, k: int = 2) -> Endomorphism:
    """Invertible linear part plus a few random terms of degree 2..maxdeg."""
    while True:
        images = []
        for i in range(n):
            t = {(j,): Fraction(rng.randint(-2, 2)) for j in range(n)}
            t[(i,)] = t[(i,)] or Fraction(1)
            if maxdeg >= 2:
                for w, c in rand_terms(rng, n, 2, maxdeg, k).items():
                    t[w] = t.get(w, 0) + c
            images.append(Series(n, trunc, t))
        h = Endomorphism(images)
        if h.is_automorphism():
            return h


def rand_triangular_derivation(rng: random.Random, n: int, trunc: int, k: int = 3) -> Derivation:
    """Lower-triangular rational linear part, random nonlinear terms of degree 2..3."""
    images = []
    for i in range(n):
        t = {(j,): Fraction(rng.randint(-2, 2)) for j in range(i)}
        t[(i,)] = Fraction(rng.choice([1, 2, 3, 1, Fraction(1, 2)]))
        for w, c in rand_terms(rng, n, 2, 3, k).items():
            t[w] = t.get(w, 0) + c
        images.append(Series(n, trunc, t))
    return Derivation(images)


def weight_one_words(weights: tuple, top: int) -> list[tuple]:
    """Every word of length <= top whose letter weights sum to exactly 1."""
    out = []

    def grow(prefix: tuple, total: Fraction):
        if total == 1:
            out.append(prefix)
            return
        if len(prefix) == top:
            return
        for i, r in enumerate(weights):
            if total + r <= 1:
                grow(prefix + (i,), total + r)

    grow((), Fraction(0))
    return out


ADMISSIBLE_TYPES = {
    2: [(Fraction(1, 3), Fraction(1, 3)), (Fraction(1, 4), Fraction(1, 4)), (Fraction(1, 3), Fraction(1, 6)),
        (Fraction(1, 4), Fraction(3, 8)), (Fraction(1, 5), Fraction(2, 5)), (Fraction(1, 6), Fraction(1, 3))],
    3: [(Fraction(1, 3),) * 3, (Fraction(1, 4), Fraction(1, 4), Fraction(1, 2) - Fraction(1, 8)),
        (Fraction(1, 3), Fraction(1, 3), Fraction(1, 6)), (Fraction(1, 4), Fraction(1, 4), Fraction(1, 4))],
}


def rand_weighted_homogeneous(rng: random.Random, n: int, trunc: int, k: int = 4):
    """(terms, weights) with every word of weight exactly 1."""
    weights = rng.choice(ADMISSIBLE_TYPES[n])
    pool = weight_one_words(weights, trunc)
    assert pool, weights
    terms = {w: rand_coeff(rng) for w in rng.sample(pool, min(k, len(pool)))}
    return terms, weights
