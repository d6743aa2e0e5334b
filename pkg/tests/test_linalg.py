import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from repst.diagrams import Diagram, Morphism, closure_trace, compose, identity
from repst.fiber import fiber_morphism
from repst.linalg import (
    Matrix,
    SparseEchelon,
    det,
    identity_matrix,
    random_rank_check,
    rank,
    solve,
    solve_right_inverse,
)
from repst.scalars import T, Poly, evaluate

entry_st = st.one_of(
    st.fractions(min_value=-4, max_value=4, max_denominator=3),
    st.lists(st.integers(-2, 2), min_size=1, max_size=3).map(Poly),
    st.sampled_from([1 / (T - 1), (T + 1) / (T * T + 1)]),
)


def matrix_st(rows, cols):
    return st.lists(st.lists(entry_st, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(
        lambda es: Matrix(es, cols=cols))


def test_rank_examples():
    assert rank(identity_matrix(3)) == 3
    assert rank(Matrix([[T, T * T], [1, T]])) == 1
    assert rank(Matrix([[T, 1], [1, T]])) == 2


def test_det_examples():
    assert det(identity_matrix(4)) == 1
    assert det(Matrix([[T, 1], [1, T]])) == T * T - 1
    m = Matrix([[T, 1, 0], [2, T, 1], [0, 1, T]])
    assert det(m) == T**3 - 3 * T


def test_closure_gram_determinant_of_end_h():
    D = Morphism.from_diagram(Diagram.from_blocks(1, 1, [[0], [1]]))
    basis = [identity(1), D]
    gram = Matrix([[closure_trace(compose(x, y)) for y in basis] for x in basis])
    g = det(gram)
    assert g == T**3 - T**2
    for n in range(2, 6):
        fibers = [fiber_morphism(b, n).to_fractions() for b in basis]

        def tr(x, y):
            return sum(x[i][j] * y[j][i] for i in range(n) for j in range(n))

        a, b, c = tr(fibers[0], fibers[0]), tr(fibers[0], fibers[1]), tr(fibers[1], fibers[1])
        assert evaluate(g, n) == a * c - b * b != 0


def test_right_inverse_examples():
    assert solve_right_inverse(identity_matrix(2)) == identity_matrix(2)
    M = Matrix([[1, T]])
    X = solve_right_inverse(M)
    assert X is not None and M @ X == identity_matrix(1)
    assert solve_right_inverse(Matrix([[1], [T]])) is None


def test_non_square_det_rejected():
    with pytest.raises(ValueError):
        det(Matrix([[1, 2]]))


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_rank_agrees_with_random_specialisation(r, c, data):
    M = data.draw(matrix_st(r, c))
    assert rank(M) == random_rank_check(M, random.Random(r * 10 + c))


@given(st.integers(1, 3), st.data())
def test_det_is_multiplicative(n, data):
    A, B = data.draw(matrix_st(n, n)), data.draw(matrix_st(n, n))
    assert det(A @ B) == det(A) * det(B)


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_solve_returns_exact_solutions(r, c, data):
    A = data.draw(matrix_st(r, c))
    x = data.draw(matrix_st(c, 1))
    B = A @ x
    X = solve(A, B)
    assert X is not None and A @ X == B


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_sparse_echelon_rank_matches_dense(r, c, data):
    M = data.draw(matrix_st(r, c))
    ech = SparseEchelon()
    for row in M.entries:
        ech.add({j: x for j, x in enumerate(row) if x})
    assert len(ech) == rank(M)


def test_sparse_echelon_reduces_members_to_zero():
    ech = SparseEchelon()
    ech.add({"a": T, "b": Fraction(1)})
    ech.add({"b": T * T, "c": 1 / (T - 1)})
    assert not ech.reduce({"a": 2 * T, "b": 2 + T * T, "c": 1 / (T - 1)})
    assert ech.reduce({"c": Fraction(1)})
