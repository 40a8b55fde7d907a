"""Exact sparse elimination against a dense Fraction oracle."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poiscoh.linalg import (
    Echelon,
    RowReducer,
    SparseMatrix,
    kernel_basis,
    rank,
    solve,
)

import oracles


scalars = st.one_of(
    st.integers(-9, 9),
    st.fractions(min_value=-5, max_value=5, max_denominator=7),
)


@st.composite
def sparse_matrices(draw, max_rows=7, max_cols=7):
    nrows = draw(st.integers(0, max_rows))
    ncols = draw(st.integers(0, max_cols))
    mat = SparseMatrix(nrows, ncols)
    if nrows and ncols:
        count = draw(st.integers(0, nrows * ncols))
        for _ in range(count):
            r = draw(st.integers(0, nrows - 1))
            c = draw(st.integers(0, ncols - 1))
            mat[r, c] = draw(scalars)
    return mat


# ---------------------------------------------------------------------------
# container behaviour


def test_setitem_getitem_and_nnz():
    mat = SparseMatrix(2, 3)
    mat[0, 1] = Fraction(1, 2)
    mat[1, 2] = -3
    mat[0, 1] = 0  # explicit zero removes the entry
    assert mat.nnz == 1
    assert mat[0, 1] == 0
    assert mat[1, 2] == -3


def test_add_to_accumulates_and_cancels():
    mat = SparseMatrix(1, 1)
    mat.add_to(0, 0, Fraction(2, 3))
    mat.add_to(0, 0, Fraction(-2, 3))
    assert mat.is_zero


def test_from_dense_roundtrip():
    rows = [[0, Fraction(1, 3)], [2, 0]]
    mat = SparseMatrix.from_dense(rows)
    assert mat.to_dense() == [[0, Fraction(1, 3)], [2, 0]]


def test_index_bounds_checked():
    mat = SparseMatrix(2, 2)
    with pytest.raises(IndexError):
        mat[2, 0] = 1
    with pytest.raises(IndexError):
        mat[0, -3]


def test_float_entries_rejected():
    mat = SparseMatrix(1, 1)
    with pytest.raises(TypeError):
        mat[0, 0] = 0.5


def test_matvec_matches_dense():
    mat = SparseMatrix.from_dense([[1, 2], [Fraction(1, 2), -1], [0, 3]])
    assert mat.matvec((2, Fraction(1, 3))) == (
        Fraction(8, 3), Fraction(2, 3), 1)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_matmul_matches_dense(data):
    n, k, m = (data.draw(st.integers(1, 5)) for _ in range(3))
    a = data.draw(sparse_matrices(max_rows=n, max_cols=k))
    a = SparseMatrix(n, k, dict(a.entries))
    b = data.draw(sparse_matrices(max_rows=k, max_cols=m))
    b = SparseMatrix(k, m, dict(b.entries))
    prod = a.matmul(b)
    ad, bd = a.to_dense(), b.to_dense()
    for r in range(n):
        for c in range(m):
            expect = sum((Fraction(ad[r][j]) * Fraction(bd[j][c])
                          for j in range(k)), Fraction(0))
            assert prod[r, c] == expect


def test_dump_text_format():
    mat = SparseMatrix.from_dense([[Fraction(1, 2), 0], [0, -2]])
    lines = mat.dump_text().splitlines()
    assert lines[0] == "2 2 2"
    assert lines[1:] == ["0 0 1/2", "1 1 -2"]


# ---------------------------------------------------------------------------
# rank / kernel / solve vs oracle


@settings(max_examples=80, deadline=None)
@given(sparse_matrices())
def test_rank_matches_dense_oracle(mat):
    assert rank(mat) == oracles.dense_rank(mat.to_dense())


@settings(max_examples=80, deadline=None)
@given(sparse_matrices())
def test_kernel_matches_dense_oracle(mat):
    basis = kernel_basis(mat)
    expected = oracles.dense_kernel(mat.to_dense(), mat.ncols)
    assert len(basis) == len(expected)
    for vec in basis:
        assert not any(mat.matvec(vec))
        assert oracles.in_span(expected, vec) or not expected
    # kernel vectors are linearly independent
    assert oracles.dense_rank([list(v) for v in basis]) == len(basis)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_solve_finds_exact_preimages(data):
    mat = data.draw(sparse_matrices())
    x = [data.draw(scalars) for _ in range(mat.ncols)]
    rhs = mat.matvec(x)
    sol = solve(mat, rhs)
    assert sol is not None
    assert mat.matvec(sol) == tuple(rhs)


def test_solve_with_no_columns():
    mat = SparseMatrix(2, 0)
    assert solve(mat, (0, 0)) == ()
    assert solve(mat, (1, 0)) is None


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_solve_detects_inconsistency(data):
    mat = data.draw(sparse_matrices(max_rows=6, max_cols=4))
    rhs = [data.draw(scalars) for _ in range(mat.nrows)]
    sol = solve(mat, rhs)
    dense = mat.to_dense()
    augmented = [row + [r] for row, r in zip(dense, rhs)]
    solvable = oracles.dense_rank(dense) == oracles.dense_rank(augmented)
    assert (sol is not None) == solvable
    if sol is not None:
        assert mat.matvec(sol) == tuple(rhs)


def test_scaled_integer_copy_preserves_rank():
    mat = SparseMatrix.from_dense([
        [Fraction(1, 2), Fraction(1, 3)],
        [Fraction(1, 4), Fraction(1, 6)],
        [Fraction(3, 2), 2],
    ])
    scaled = mat.scaled_integer_copy()
    for _, _, v in scaled.triples():
        assert isinstance(v, int)
    assert rank(scaled) == rank(mat) == 2


def test_echelon_pivots_and_free_cols_partition():
    mat = SparseMatrix.from_dense([[1, 2, 3], [2, 4, 6], [0, 0, 1]])
    ech = Echelon(mat)
    assert ech.rank == 2
    assert sorted(ech.pivot_cols + ech.free_cols) == [0, 1, 2]


def test_kernel_of_zero_matrix_is_identity_basis():
    mat = SparseMatrix(3, 4)
    basis = kernel_basis(mat)
    assert len(basis) == 4
    assert oracles.dense_rank([list(v) for v in basis]) == 4


# ---------------------------------------------------------------------------
# incremental reduction


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(scalars, min_size=5, max_size=5), max_size=8),
       st.lists(scalars, min_size=5, max_size=5))
def test_row_reducer_membership_matches_span_oracle(rows, probe):
    red = RowReducer(5)
    for row in rows:
        red.add(row)
    assert red.rank == oracles.dense_rank(rows)
    assert red.contains(probe) == oracles.in_span(rows, probe)


def test_row_reducer_add_reports_novelty():
    red = RowReducer(3)
    assert red.add([1, 0, 0])
    assert red.add([0, Fraction(1, 2), 0])
    assert not red.add([2, 3, 0])
    assert red.rank == 2
