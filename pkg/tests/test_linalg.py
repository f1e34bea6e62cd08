from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from rht.linalg import (I, ONE, ZERO, Gaussian, RelativeQuotient, SparseMatrix, Subspace, conj, direct_sum_check,
                        format_scalar, gauss, image, kernel_basis, parse_scalar, preimage, rank, rref, solve)

small = st.integers(-3, 3)
fracs = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))
gaussians = st.builds(gauss, fracs, fracs)


def matrices(entries=small, max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r)))


def _sym(x):
    if isinstance(x, Gaussian):
        return sympy.Rational(x.re.numerator, x.re.denominator) + sympy.I * sympy.Rational(x.im.numerator, x.im.denominator)
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


def sympy_rank(rows):
    return sympy.Matrix([[_sym(x) for x in r] for r in rows]).rank(simplify=True)


@given(matrices())
def test_rank_nullity(rows):
    m = SparseMatrix.from_dense(rows)
    assert rank(m) + kernel_basis(m).dim == m.cols


@given(matrices(fracs))
def test_rank_matches_sympy(rows):
    assert rank(SparseMatrix.from_dense(rows)) == sympy_rank(rows)


@given(matrices(gaussians, 4, 4))
def test_gaussian_rank_matches_sympy(rows):
    assert rank(SparseMatrix.from_dense(rows)) == sympy_rank(rows)


@given(matrices())
def test_kernel_vectors_are_killed(rows):
    m = SparseMatrix.from_dense(rows)
    for v in kernel_basis(m).basis:
        assert not any(m.apply(v))


@given(matrices(), st.data())
def test_solve_roundtrip(rows, data):
    m = SparseMatrix.from_dense(rows)
    x = data.draw(st.lists(small, min_size=m.cols, max_size=m.cols))
    b = m.apply(x)
    y = solve(m, b)
    assert y is not None and m.apply(y) == b


def test_solve_inconsistent():
    m = SparseMatrix.from_dense([[1, 0], [1, 0]])
    assert solve(m, (1, 2)) is None


def test_rref_canonical_pivots():
    m = SparseMatrix.from_dense([[0, 2, 4], [0, 1, 2], [1, 0, 1]])
    r, piv = rref(m)
    assert piv == (0, 1)
    assert r.to_dense()[:2] == [[1, 0, 1], [0, 1, 2]]


@given(matrices())
def test_subspace_canonical_under_reordering(rows):
    n = len(rows[0])
    assert Subspace.span(n, rows) == Subspace.span(n, list(reversed(rows)))


@given(matrices(max_cols=5), matrices(max_cols=5))
def test_intersection_dimension_formula(a, b):
    n = min(len(a[0]), len(b[0]))
    u = Subspace.span(n, [r[:n] for r in a])
    w = Subspace.span(n, [r[:n] for r in b])
    assert (u + w).dim + u.intersect(w).dim == u.dim + w.dim


@given(matrices())
def test_preimage_of_image_is_everything(rows):
    m = SparseMatrix.from_dense(rows)
    assert preimage(m, image(m)).dim == m.cols


def test_relative_quotient():
    big = Subspace.span(3, [(1, 0, 0), (0, 1, 0)])
    small = Subspace.span(3, [(1, 1, 0)])
    q = RelativeQuotient(big, small)
    assert q.dim == 1
    assert q.project((1, 1, 0)) == (ZERO,)
    assert q.project(q.lift((ONE,))) == (ONE,)


def test_direct_sum_check():
    a = Subspace.span(3, [(1, 0, 0)])
    b = Subspace.span(3, [(0, 1, 0)])
    c = Subspace.span(3, [(1, 1, 0)])
    assert direct_sum_check([a, b], 3) == (True, False)
    assert direct_sum_check([a, b, c], 3) == (False, False)
    assert direct_sum_check([a, b, Subspace.span(3, [(0, 0, 1)])], 3) == (True, True)


def test_gaussian_arithmetic():
    z = gauss(1, 2)
    assert z * conj(z) == 5
    assert isinstance(z * conj(z), Fraction)
    assert I * I == -1
    assert (1 / z) * z == 1
    assert gauss(3, 0) == 3 and not isinstance(gauss(3, 0), Gaussian)


@given(gaussians)
def test_scalar_format_roundtrip(z):
    assert parse_scalar(format_scalar(z)) == z


def test_subspace_conjugate():
    s = Subspace.span(2, [(ONE, I)])
    assert s.conjugate() == Subspace.span(2, [(ONE, -I)])
    assert not s.is_real()
    assert (s + s.conjugate()).is_real()
