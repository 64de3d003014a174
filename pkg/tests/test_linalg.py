from hypothesis import given, strategies as st

from qasa.linalg import SMat, kernel, rank, rref, solve
from qasa.scalars import ONE, Q, ZERO, QScalar

entry = st.sampled_from([ZERO, ZERO, ONE, -ONE, Q, Q + 1, QScalar(2) / Q])


def mats(r, c):
    return st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r)


def mul(A, x):
    return [sum((a * b for a, b in zip(row, x)), ZERO) for row in A]


@given(mats(3, 4))
def test_kernel_is_annihilated_and_rank_nullity(A):
    K = kernel(A, 4)
    for v in K:
        assert not any(mul(A, v))
    assert rank(A) + len(K) == 4
    assert rank(K) == len(K) if K else True


@given(mats(3, 3), st.lists(entry, min_size=3, max_size=3))
def test_solve_returns_a_solution(A, x):
    b = mul(A, x)
    y = solve(A, b)
    assert y is not None and mul(A, y) == b


def test_solve_inconsistent():
    assert solve([[ONE, ONE], [ONE, ONE]], [ONE, ZERO]) is None


def test_rref_example():
    R, piv = rref([[ZERO, Q, ONE], [ONE, ONE, ZERO]])
    assert piv == [0, 1]
    assert R[0] == [ONE, ZERO, -Q.inverse()]


@given(mats(3, 3), mats(3, 3), mats(3, 3))
def test_sparse_matrix_algebra(A, B, C):
    a, b, c = (SMat.from_dense(X) for X in (A, B, C))
    assert (a @ b) @ c == a @ (b @ c)
    assert a @ (b + c) == a @ b + a @ c
    assert (a - a).is_zero()
    assert (a @ SMat.identity(3)) == a
    assert a.to_dense() == A
    assert (a ** 2) == a @ a
    v = [ONE, Q, ZERO]
    assert a.apply(b.apply(v)) == (a @ b).apply(v)
    assert hash(SMat.from_dense(A)) == hash(a)


def test_sparse_helpers():
    d = SMat.diag([Q, ONE, Q])
    assert d.is_diagonal() and d.diagonal() == [Q, ONE, Q]
    u = SMat.unit(3, 0, 2, Q)
    assert u.nnz() == 1 and u.get(0, 2) == Q and (u @ u).is_zero()
    assert u.scale(Q.inverse()) == SMat.unit(3, 0, 2)
