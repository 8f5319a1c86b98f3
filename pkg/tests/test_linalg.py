from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from arith_hilbert.linalg import determinant, kernel_basis, mat_vec, rank, solve_in_span

entries = st.fractions(min_value=-9, max_value=9, max_denominator=6)


def square(k):
    return st.lists(st.lists(entries, min_size=k, max_size=k), min_size=k, max_size=k)


def test_kernel_examples():
    assert kernel_basis([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == []
    assert kernel_basis([[1, 1]]) == [[1, -1]]
    assert kernel_basis([[1, -1, 0], [1, 0, -1], [0, 1, -1]]) == [[1, 1, 1]]


def test_kernel_of_empty_matrix_is_everything():
    assert kernel_basis([], 2) == [[1, 0], [0, 1]]


def test_determinant_small():
    assert determinant([[2, 1], [1, 2]]) == 3
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[1, 2], [2, 4]]) == 0
    assert determinant([]) == 1


def test_solve_in_span():
    cols = [[1, 0, 1], [0, 1, 1]]
    assert solve_in_span(cols, [2, 3, 5]) == [2, 3]
    assert solve_in_span(cols, [1, 1, 0]) is None


@given(st.integers(1, 5).flatmap(square))
def test_determinant_matches_sympy(M):
    assert determinant(M) == Fraction(str(sympy.Matrix(M).det()))


@given(st.integers(1, 4), st.integers(1, 6), st.data())
def test_kernel_soundness(m, k, data):
    M = data.draw(st.lists(st.lists(entries, min_size=k, max_size=k), min_size=m, max_size=m))
    K = kernel_basis(M)
    assert len(K) == k - rank(M)
    assert rank(M) == sympy.Matrix(M).rank()
    for v in K:
        assert all(x == 0 for x in mat_vec(M, v))
