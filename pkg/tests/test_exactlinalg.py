"""Exact linear algebra: rank/kernel oracles, solve, and agreement of the
compiled kernel with the pure-Python fallback."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dgkoszul.exactlinalg import (
    KERNEL,
    FieldSpec,
    SparseMatrix,
    rref,
    rref_fallback,
    solve,
    vec_add,
    vec_addmul,
    vec_scale,
)


def test_field_arithmetic_f5(F5):
    assert F5.add(3, 4) == 2
    assert F5.inv(2) == 3
    assert F5.neg(1) == 4
    assert F5.from_int(-1) == 4


def test_field_arithmetic_q(Q):
    assert Q.inv(Fraction(2, 3)) == Fraction(3, 2)
    assert Q.from_int(7) == Fraction(7)


def test_vec_ops_cancel(F5):
    u = {"a": 2, "b": 3}
    v = {"a": 3, "c": 1}
    assert vec_add(F5, u, v) == {"b": 3, "c": 1}
    assert vec_scale(F5, 0, u) == {}
    assert vec_addmul(F5, u, 4, {"b": 3}) == {"a": 2}


def test_rref_rank_oracle(F5):
    # [[1,2],[2,4]] has rank 1 over F_5
    m = SparseMatrix.from_dense([[1, 2], [2, 4]], F5)
    r = rref(m)
    assert r.rank == 1
    assert r.pivots == [0]
    assert len(r.kernel_basis) == 1
    # kernel vector (x, y) satisfies x + 2y = 0 over F_5
    k = r.kernel_basis[0]
    assert (k.get(0, 0) + 2 * k.get(1, 0)) % 5 == 0


def test_rref_identity(Q):
    m = SparseMatrix.identity(3, Q)
    r = rref(m)
    assert r.rank == 3
    assert r.kernel_basis == []


def test_rref_rationals_exact(Q):
    m = SparseMatrix.from_dense(
        [[Fraction(1, 2), Fraction(1, 3)],
         [Fraction(1, 4), Fraction(1, 6)]], Q)
    assert rref(m).rank == 1


def test_solve_consistent_and_inconsistent(F5):
    m = SparseMatrix.from_dense([[1, 1], [0, 1]], F5)
    x = solve(m, {0: 3, 1: 1})
    assert x is not None
    assert m.matvec(x) == {0: 3, 1: 1}
    m2 = SparseMatrix.from_dense([[1, 1], [2, 2]], F5)
    assert solve(m2, {0: 1, 1: 0}) is None


def test_from_columns_matches_dense(F5):
    cols = [{0: 1, 2: 3}, {1: 4}]
    m = SparseMatrix.from_columns(cols, 3, F5)
    assert m.rows == 3 and m.cols == 2
    assert m.column(0) == {0: 1, 2: 3}
    assert m.column(1) == {1: 4}


@st.composite
def sparse_matrices(draw):
    p = draw(st.sampled_from([2, 5]))
    f = FieldSpec.prime(p)
    rows = draw(st.integers(1, 6))
    cols = draw(st.integers(1, 6))
    entries = {}
    for _ in range(draw(st.integers(0, 12))):
        r = draw(st.integers(0, rows - 1))
        c = draw(st.integers(0, cols - 1))
        v = draw(st.integers(1, p - 1))
        entries[(r, c)] = v
    return SparseMatrix(rows, cols, f, entries)


@settings(max_examples=60, deadline=None)
@given(sparse_matrices())
def test_rank_nullity_and_kernel(m):
    r = rref(m)
    assert r.rank + len(r.kernel_basis) == m.cols
    for k in r.kernel_basis:
        assert m.matvec(k) == {}
    for v in r.image_basis:
        # image vectors are solvable
        assert solve(m, v) is not None


@settings(max_examples=60, deadline=None)
@given(sparse_matrices())
def test_compiled_and_fallback_agree(m):
    a = rref(m)
    b = rref_fallback(m)
    assert a.rank == b.rank
    assert a.pivots == b.pivots
    assert a.rref_rows == b.rref_rows


def test_kernel_selected():
    assert KERNEL in ("compiled", "python")


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        FieldSpec.prime(6)
