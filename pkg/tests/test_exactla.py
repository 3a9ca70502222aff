from fractions import Fraction

import numpy as np
import pytest

from cleftgp.exactla import (
    Field,
    FieldMismatch,
    Matrix,
    NotAComplex,
    hstack,
    homology_dim_at,
    image_basis,
    in_span,
    inverse,
    kernel_basis,
    kron,
    quotient_map,
    random_invertible,
    random_matrix,
    rank,
    solve,
    vstack,
)

F7, F5, Q = Field(7), Field(5), Field(None)


def m(rows, fld=F7):
    return Matrix.from_rows(fld, rows)


def test_field_rejects_composite():
    with pytest.raises(ValueError):
        Field(6)


def test_entries_reduced_mod_p():
    assert m([[8, -1]]).tolist() == [[1, 6]]


def test_rank_examples():
    assert rank(Matrix.identity(F7, 3)) == 3
    assert rank(Matrix.zeros(F7, 2, 5)) == 0
    assert rank(m([[1, 2], [2, 4]])) == 1


def test_rank_depends_on_characteristic():
    a = [[1, 1], [1, 8]]
    assert rank(m(a, F7)) == 1
    assert rank(m(a, Q)) == 2


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(F7, 2)).cols == 0
    assert kernel_basis(Matrix.zeros(F7, 2, 3)).cols == 3
    row = m([[1, 1, 0]], F5)
    k = kernel_basis(row)
    assert k.cols == 2 and (row @ k).is_zero()


def test_kernel_exhaustive_over_gf5():
    row = m([[1, 1, 0]], F5)
    kern = kernel_basis(row)
    count = 0
    for a in range(5):
        for b in range(5):
            for c in range(5):
                v = Matrix.column(F5, [a, b, c])
                if (row @ v).is_zero():
                    count += 1
                    assert in_span(kern, v)
    assert count == 25


def test_solve_examples():
    b = m([[1, 2], [3, 4]])
    assert solve(Matrix.identity(F7, 2), b) == b
    assert solve(Matrix.zeros(F7, 1, 1), m([[1]])) is None
    assert solve(m([[2]]), m([[3]])) == m([[5]])


def test_solve_over_rationals():
    x = solve(m([[2]], Q), m([[1]], Q))
    assert x.entry(0, 0) == Fraction(1, 2)


def test_kron_examples():
    assert kron(Matrix.identity(F7, 2), Matrix.identity(F7, 3)) == Matrix.identity(F7, 6)
    assert kron(Matrix.zeros(F7, 2, 2), m([[1, 2]])).is_zero()
    assert kron(m([[1, 1]], F5), m([[1, 2]], F5)) == m([[1, 2, 1, 2]], F5)
    # a row times a column gives a 2 x 2 block, second index fastest
    assert kron(m([[1, 1]], F5), m([[1], [2]], F5)) == m([[1, 1], [2, 2]], F5)


def test_homology_examples():
    assert homology_dim_at(Matrix.zeros(F7, 2, 1), Matrix.identity(F7, 2)) == 0
    assert homology_dim_at(Matrix.zeros(F7, 3, 1), Matrix.zeros(F7, 1, 3)) == 3
    x = m([[0, 0], [1, 0]])
    assert homology_dim_at(x, x) == 0


def test_homology_requires_complex():
    with pytest.raises(NotAComplex):
        homology_dim_at(Matrix.identity(F7, 2), Matrix.identity(F7, 2))


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        Matrix.identity(F7, 2) @ Matrix.identity(F5, 2)


def test_inverse_and_stacking():
    a = m([[1, 2], [3, 4]])
    assert a @ inverse(a) == Matrix.identity(F7, 2)
    assert hstack([a, a]).shape == (2, 4)
    assert vstack([a, a]).shape == (4, 2)


def test_quotient_map_splits():
    w = m([[1], [0], [0]])
    proj, section = quotient_map(w)
    assert proj.shape == (2, 3)
    assert (proj @ w).is_zero()
    assert proj @ section == Matrix.identity(F7, 2)


def test_image_basis_is_independent():
    a = m([[1, 2, 3], [2, 4, 6]])
    assert image_basis(a).cols == 1


@pytest.mark.parametrize("fld", [F7, Field(11), Q])
def test_random_invertible(fld):
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = random_invertible(fld, rng, 4)
        assert rank(a) == 4


@pytest.mark.parametrize("fld", [F7, Q])
def test_rank_nullity_small_sample(fld):
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = random_matrix(fld, rng, int(rng.integers(0, 5)), int(rng.integers(0, 5)))
        assert rank(a) + kernel_basis(a).cols == a.cols
