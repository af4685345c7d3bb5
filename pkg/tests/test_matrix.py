from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ybsystem.arith import QQ, FunctionField, PrimeField
from ybsystem.matrix import (
    Matrix,
    SingularMatrixError,
    determinant,
    embed,
    inverse,
    is_invertible,
    kron,
    partial_transpose_t1,
    permutation_P,
    rank,
    rref,
)


def test_construction_and_access():
    M = Matrix.parse([["1", "1/2"], ["-3", "0"]])
    assert M[0, 1] == Fraction(1, 2)
    assert M.shape == (2, 2)
    assert M.trace() == 1
    assert M.transpose()[1, 0] == Fraction(1, 2)
    assert M.to_strings() == [["1", "1/2"], ["-3", "0"]]
    with pytest.raises(ValueError):
        Matrix(2, 2, [1, 2, 3], QQ)
    with pytest.raises(ValueError):
        Matrix.identity(2) @ Matrix.identity(3)


def test_field_mismatch_is_rejected():
    with pytest.raises((TypeError, ValueError)):
        Matrix.identity(2, QQ) + Matrix.identity(2, PrimeField(3))


def test_permutation_matrix_swaps_factors():
    P = permutation_P(2)
    assert P.to_strings() == [["1", "0", "0", "0"], ["0", "0", "1", "0"], ["0", "1", "0", "0"], ["0", "0", "0", "1"]]
    A = Matrix.from_rows([[1, 2], [3, 4]], QQ)
    B = Matrix.from_rows([[0, 1], [5, 7]], QQ)
    assert P @ kron(A, B) @ P == kron(B, A)


def test_embed_legs():
    d = 2
    A = Matrix.from_rows([[1, 2], [3, 4]], QQ)
    B = Matrix.from_rows([[0, 1], [1, 1]], QQ)
    I = Matrix.identity(2, QQ)
    M = kron(A, B)
    assert embed(M, (1, 2), d) == kron(M, I)
    assert embed(M, (2, 3), d) == kron(I, M)
    assert embed(M, (1, 3), d) == kron(kron(A, I), B)
    with pytest.raises(ValueError):
        embed(M, (2, 1), d)


def test_partial_transpose():
    A = Matrix.from_rows([[1, 2], [3, 4]], QQ)
    B = Matrix.from_rows([[0, 1], [5, 7]], QQ)
    assert partial_transpose_t1(kron(A, B), 2) == kron(A.transpose(), B)


def test_rref_pivots_and_rank():
    A = Matrix.from_rows([[0, 2, 4], [1, 1, 1], [1, 2, 3]], QQ)
    red, piv = rref(A)
    assert piv == [0, 1]
    assert red.to_strings() == [["1", "0", "-1"], ["0", "1", "2"], ["0", "0", "0"]]
    assert rank(A) == 2


def test_determinant_and_inverse():
    R = Matrix.from_rows([[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [-1, 0, 0, 1]], QQ)
    assert determinant(R) == -4
    assert R @ inverse(R) == Matrix.identity(4, QQ)
    S = Matrix.from_rows([[1, 2], [2, 4]], QQ)
    assert not is_invertible(S)
    with pytest.raises(SingularMatrixError):
        inverse(S)


def test_symbolic_inverse():
    F = FunctionField(("t",))
    t = F.var("t")
    M = Matrix.from_rows([[t, F(1)], [F(0), t]], F)
    assert determinant(M) == t * t
    assert M @ inverse(M) == Matrix.identity(2, F)


def test_prime_field_determinant():
    F = PrimeField(5)
    M = Matrix.from_rows([[2, 1], [1, 3]], F)
    assert determinant(M) == 0
    assert not is_invertible(M)


small = st.integers(-5, 5)


def mats(n):
    return st.lists(small, min_size=n * n, max_size=n * n).map(lambda e: Matrix(n, n, e, QQ))


@settings(max_examples=100, deadline=None)
@given(mats(3), mats(3))
def test_determinant_multiplicative(A, B):
    assert determinant(A @ B) == determinant(A) * determinant(B)


@settings(max_examples=100, deadline=None)
@given(mats(2), mats(2), mats(2))
def test_kron_associative_and_distributive(A, B, C):
    assert kron(kron(A, B), C) == kron(A, kron(B, C))
    assert kron(A, B + C) == kron(A, B) + kron(A, C)


def test_partial_transpose_basics():
    I4 = Matrix.identity(4, QQ)
    assert partial_transpose_t1(I4, 2) == I4
    M = Matrix(4, 4, range(16), QQ)
    assert partial_transpose_t1(partial_transpose_t1(M, 2), 2) == M
    assert partial_transpose_t1(M, 2)[1, 2] == M[3, 0]  # (0,1),(1,0) <- (1,1),(0,0)


def test_R_H02_has_no_second_inversion():
    R = Matrix.from_rows([[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [-1, 0, 0, 1]], QQ)
    Rt = partial_transpose_t1(R, 2)
    assert Rt.to_strings()[1] == Rt.to_strings()[2] == ["0", "1", "-1", "0"]
    assert determinant(Rt) == 0


def test_diagonal_kron_symbolic():
    F = FunctionField(("s",))
    s = F.var("s")
    D = Matrix.diag([F(1), s], F)
    assert kron(D, D) == Matrix.diag([F(1), s, s, s * s], F)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=16, max_size=16))
def test_mixed_product_over_f7(e):
    F = PrimeField(7)
    A, B, C, D = (Matrix(2, 2, e[4 * i:4 * i + 4], F) for i in range(4))
    assert kron(A, B) @ kron(C, D) == kron(A @ C, B @ D)
