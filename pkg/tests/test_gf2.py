import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qtanner.gf2 import (
    BinaryMatrix,
    GF2Error,
    RowBasis,
    is_in_rowspace,
    kernel_basis,
    kron,
    rank,
    rref,
    solve_submatrix,
)


def random_matrix(rng, n_rows, n_cols):
    return BinaryMatrix.from_dense(rng.integers(0, 2, size=(n_rows, n_cols)))


def test_rank_identity_and_zero():
    assert rank(BinaryMatrix.identity(3)) == 3
    assert rank(BinaryMatrix.zeros(2, 5)) == 0


def test_rank_transpose_agrees():
    rng = np.random.default_rng(7)
    for _ in range(20):
        m = random_matrix(rng, rng.integers(1, 9), rng.integers(1, 9))
        assert rank(m) == rank(m.transpose())


def test_rref_small():
    m = BinaryMatrix.from_dense([[1, 1], [0, 1]])
    reduced, pivots = rref(m)
    assert reduced.to_dense().tolist() == [[1, 0], [0, 1]]
    assert pivots == [0, 1]


def test_rref_zero_matrix():
    m = BinaryMatrix.zeros(3, 4)
    reduced, pivots = rref(m)
    assert reduced == m
    assert pivots == []


def test_rref_preserves_row_space():
    # Oracle: mutual row-space membership between original and reduced rows.
    rng = np.random.default_rng(3)
    m = random_matrix(rng, 4, 8)
    reduced, _ = rref(m)
    for v in reduced.rows:
        assert is_in_rowspace(m, v)
    for v in m.rows:
        assert is_in_rowspace(reduced, v)


def test_kernel_of_parity_row():
    m = BinaryMatrix.from_dense([[1, 1, 1]])
    k = kernel_basis(m)
    assert k.n_rows == 2
    for r in range(2):
        assert k.row_weight(r) % 2 == 0
        assert m.mul_vec(k.rows[r]) == 0


def test_kernel_of_identity_empty():
    k = kernel_basis(BinaryMatrix.identity(4))
    assert k.n_rows == 0


def test_kernel_of_table5_small_parity():
    # Enumerating all 8 vectors of F_2^3 leaves a single kernel vector (0,1,1).
    h = BinaryMatrix.from_dense([[1, 0, 0], [1, 1, 1]])
    expected = [v for v in range(8) if h.mul_vec(v) == 0 and v != 0]
    assert expected == [0b110]  # bits 1 and 2 set -> (0, 1, 1)
    k = kernel_basis(h)
    assert k.n_rows == 1
    assert k.rows[0] == 0b110


@given(st.integers(1, 7), st.integers(1, 7), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_kernel_dimension_and_orthogonality(n_rows, n_cols, seed):
    rng = np.random.default_rng(seed)
    m = random_matrix(rng, n_rows, n_cols)
    k = kernel_basis(m)
    assert k.n_rows == n_cols - rank(m)
    for v in k.rows:
        assert m.mul_vec(v) == 0
    # Basis rows are independent.
    assert rank(k) == k.n_rows


def test_solve_identity():
    m = BinaryMatrix.identity(4)
    s = 0b1010
    assert solve_submatrix(m, [0, 1, 2, 3], s) == s


def test_solve_back_substitution():
    m = BinaryMatrix.from_dense([[1, 1], [0, 1]])
    e = solve_submatrix(m, [0, 1], 0b11)
    assert e == 0b10  # e = (0, 1)


def test_solve_random_consistent():
    rng = np.random.default_rng(11)
    for _ in range(25):
        m = random_matrix(rng, 6, 10)
        _, pivots = rref(m)
        if not pivots:
            continue
        true_e = 0
        for c in pivots:
            if rng.integers(0, 2):
                true_e |= 1 << c
        s = m.mul_vec(true_e)
        e = solve_submatrix(m, pivots, s)
        assert m.mul_vec(e) == s


def test_solve_singular_subset_errors():
    m = BinaryMatrix.from_dense([[1, 1], [1, 1]])
    with pytest.raises(GF2Error):
        solve_submatrix(m, [0, 1], 0b01)


def test_solve_inconsistent_errors():
    m = BinaryMatrix.from_dense([[1, 0], [1, 0]])
    with pytest.raises(GF2Error):
        solve_submatrix(m, [0], 0b01)


def test_kron_identity_case():
    rng = np.random.default_rng(5)
    m = random_matrix(rng, 3, 4)
    one = BinaryMatrix.from_dense([[1]])
    assert kron(one, m) == m
    assert kron(m, one) == m


def test_kron_weight_multiplicativity():
    a = BinaryMatrix.from_dense([[0, 1, 1]])
    b = BinaryMatrix.from_dense([[1, 1, 0]])
    prod = kron(a, b)
    assert prod.n_rows == 1 and prod.n_cols == 9
    assert prod.row_weight(0) == 4
    # Column (i, j) maps to i * b.n_cols + j.
    dense = prod.to_dense()[0]
    for i in range(3):
        for j in range(3):
            assert dense[i * 3 + j] == a.get(0, i) * b.get(0, j)


@given(st.integers(0, 2**9 - 1), st.integers(0, 2**9 - 1))
@settings(max_examples=40, deadline=None)
def test_kron_row_vector_weights(abits, bbits):
    a = BinaryMatrix(1, 9, [abits])
    b = BinaryMatrix(1, 9, [bbits])
    assert kron(a, b).row_weight(0) == a.row_weight(0) * b.row_weight(0)


def test_kron_dimension_on_small_pair():
    # dim(C_A (x) C_B) = dim(C_A) * dim(C_B): 1 * 2 = 2 basis rows.
    ga = BinaryMatrix.from_dense([[0, 1, 1]])
    gb = BinaryMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    assert kron(ga, gb).n_rows == 2


def test_alist_round_trip():
    rng = np.random.default_rng(13)
    for shape in [(4, 8), (1, 1), (5, 3)]:
        m = random_matrix(rng, *shape)
        assert BinaryMatrix.from_alist(m.to_alist()) == m


def test_json_round_trip():
    rng = np.random.default_rng(17)
    m = random_matrix(rng, 3, 7)
    assert BinaryMatrix.from_json(m.to_json()) == m


def test_row_basis_incremental():
    basis = RowBasis(4)
    assert basis.add(0b0011)
    assert basis.add(0b0110)
    assert not basis.add(0b0101)  # dependent
    assert basis.contains(0b0101)
    assert not basis.contains(0b1000)
    assert basis.rank == 2


def test_matmul_and_mul_vec():
    rng = np.random.default_rng(23)
    a = random_matrix(rng, 4, 6)
    b = random_matrix(rng, 6, 5)
    prod = a.matmul(b)
    ad, bd = a.to_dense().astype(int), b.to_dense().astype(int)
    assert np.array_equal(prod.to_dense(), (ad @ bd) % 2)
    v = int(rng.integers(0, 2**6))
    vd = np.array([(v >> i) & 1 for i in range(6)])
    sd = (ad @ vd) % 2
    s = a.mul_vec(v)
    assert [(s >> i) & 1 for i in range(4)] == sd.tolist()
