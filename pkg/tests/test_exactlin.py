from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncsaito.errors import Inconsistent, NonRationalSpectrum
from ncsaito.exactlin import (
    RatMatrix,
    SparseEchelon,
    charpoly,
    kernel,
    rational_jordan_form,
    rational_roots,
    rref,
    solve,
)

small = st.integers(-4, 4)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(RatMatrix)


def test_rref_dependent_rows():
    r, piv = rref(RatMatrix([[1, 2], [2, 4]]))
    assert piv == (0,)
    assert r == RatMatrix([[1, 2], [0, 0]])


def test_rref_identity_and_swap():
    eye = RatMatrix.identity(3)
    assert rref(eye) == (eye, (0, 1, 2))
    assert rref(RatMatrix([[0, 1], [1, 0]])) == (RatMatrix.identity(2), (0, 1))


def test_solve_examples():
    assert solve(RatMatrix.identity(2), [3, Fraction(1, 2)]) == (3, Fraction(1, 2))
    assert solve(RatMatrix([[1, 1]]), [2]) == (2, 0)
    with pytest.raises(Inconsistent):
        solve(RatMatrix([[1], [1]]), [1, 2])


def test_charpoly_two_by_two():
    # t^2 - 3t + 2
    assert charpoly(RatMatrix([[0, 1], [-2, 3]])) == (1, -3, 2)


def test_charpoly_matches_determinant_expansion():
    m = RatMatrix([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    # det(tI - m) = t^3 - 9t^2 + 24t - 18, expanded by hand
    assert charpoly(m) == (1, -9, 24, -18)


def test_rational_roots_with_leftover():
    roots, rest = rational_roots([2, -3, 1])  # 2t^2 - 3t + 1 = (2t - 1)(t - 1)
    assert sorted(r for r, _ in roots) == [Fraction(1, 2), 1]
    roots, rest = rational_roots([1, 0, 1])
    assert roots == [] and len(rest) == 3


def test_jordan_single_block():
    jd = rational_jordan_form(RatMatrix([[1, 1], [0, 1]]))
    assert list(jd.blocks) == [(1, 2)]
    assert jd.transform == RatMatrix.identity(2)


def test_jordan_distinct_eigenvalues():
    m = RatMatrix([[0, 1], [-2, 3]])
    jd = rational_jordan_form(m)
    assert sorted(jd.blocks) == [(1, 1), (2, 1)]
    p = jd.transform
    assert p.inverse() @ m @ p == jd.jordan_matrix()
    assert jd.jordan_matrix().is_diagonal()


def test_jordan_rejects_rotation():
    with pytest.raises(NonRationalSpectrum):
        rational_jordan_form(RatMatrix([[0, 1], [-1, 0]]))


def test_jordan_mixed_blocks():
    m = RatMatrix([[2, 1, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [1, 0, 0, 3]])
    jd = rational_jordan_form(m)
    assert sorted(jd.blocks) == [(2, 1), (2, 2), (3, 1)]
    assert jd.transform.inverse() @ m @ jd.transform == jd.jordan_matrix()


@settings(max_examples=60, deadline=None)
@given(matrices(3, 4))
def test_rank_nullity_and_idempotent(m):
    r, piv = rref(m)
    assert rref(r) == (r, piv)
    ker = kernel(m)
    assert len(piv) + len(ker) == m.cols
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3), matrices(3, 3))
def test_jordan_identity_on_triangular(diag, upper, conj):
    # triangular matrices have rational spectrum; conjugate by something invertible
    t = RatMatrix([[diag[0], upper[0], upper[1]], [0, diag[1], upper[2]], [0, 0, diag[2]]])
    p = conj if conj.rank() == 3 else RatMatrix.identity(3)
    m = p @ t @ p.inverse()
    jd = rational_jordan_form(m)
    assert sum(size for _, size in jd.blocks) == 3
    assert jd.transform.inverse() @ m @ jd.transform == jd.jordan_matrix()
    assert sorted(jd.eigenvalues()) == sorted(Fraction(d) for d in diag)


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4))
def test_operations_are_deterministic(m):
    assert rref(m) == rref(RatMatrix(m.tolist()))
    assert charpoly(m) == charpoly(RatMatrix(m.tolist()))


def test_sparse_echelon_express_and_reduce():
    ech = SparseEchelon(track=True)
    ech.add({0: 1, 1: 1}, "a")
    ech.add({1: 1, 2: 1}, "b")
    combo = ech.express({0: 1, 2: -1})
    assert combo == {"a": 1, "b": -1}
    assert ech.reduce({0: 1, 1: 1}) == {}
    with pytest.raises(Inconsistent):
        ech.express({2: 1, 3: 1})


def test_sparse_echelon_interreduce_matches_rref():
    rows = [{0: 2, 1: 4, 2: 1}, {1: 1, 2: 1}, {0: 1, 2: 3}]
    ech = SparseEchelon()
    for r in rows:
        ech.add(r)
    ech.interreduce()
    dense, piv = rref(RatMatrix([[r.get(j, 0) for j in range(3)] for r in rows]))
    got = {p: ech.rows[p] for p in ech.pivots}
    for i, p in enumerate(piv):
        assert {j: dense[i, j] for j in range(3) if dense[i, j]} == got[p]
