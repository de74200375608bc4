import numpy as np
import pytest

from qtanner import gf2
from qtanner.gf2 import BinaryMatrix
from qtanner.codes import (
    ClassicalCode,
    CodeError,
    build_pair,
    dual,
    min_distance_exhaustive,
    random_systematic,
    reduce_basis_weights,
)


def table5_small_pair():
    ca = ClassicalCode.from_parity(BinaryMatrix.from_dense([[1, 0, 0], [1, 1, 1]]))
    cb = ClassicalCode.from_parity(BinaryMatrix.from_dense([[1, 1, 1]]))
    return ca, cb


def test_random_systematic_orthogonality():
    rng = np.random.default_rng(0)
    for _ in range(10):
        k = int(rng.integers(1, 5))
        n = int(rng.integers(k + 1, 9))
        code = random_systematic(k, n, rng)
        assert code.generator.matmul(code.parity.transpose()).is_zero()
        assert code.k == k and code.n == n


def test_random_systematic_shapes_match_small_reference():
    # A [3, 1] code has a 2x3 parity check, like the small C_A instances.
    code = random_systematic(1, 3, np.random.default_rng(1))
    assert code.parity.n_rows == 2 and code.parity.n_cols == 3


def test_random_systematic_seed_determinism():
    a = random_systematic(3, 7, np.random.default_rng(99))
    b = random_systematic(3, 7, np.random.default_rng(99))
    assert a.generator == b.generator and a.parity == b.parity


def test_random_systematic_invalid_dims():
    rng = np.random.default_rng(0)
    with pytest.raises(CodeError):
        random_systematic(0, 3, rng)
    with pytest.raises(CodeError):
        random_systematic(3, 3, rng)


def test_dual_swaps_roles():
    code = random_systematic(2, 6, np.random.default_rng(5))
    dd = dual(dual(code))
    assert dd.generator == code.generator
    assert dd.parity == code.parity
    d = dual(code)
    assert d.k == code.n - code.k


def test_dual_row_spaces_match_original():
    code = random_systematic(3, 7, np.random.default_rng(8))
    d = dual(code)
    for row in d.generator.rows:
        assert gf2.is_in_rowspace(code.parity, row)


def test_dual_of_even_weight_code_is_repetition():
    cb = ClassicalCode.from_parity(BinaryMatrix.from_dense([[1, 1, 1]]))
    rep = dual(cb)
    words = sorted(rep.codewords())
    assert words == [0b000, 0b111]
    assert min_distance_exhaustive(rep) == 3


def test_min_distance_small_reference_codes():
    ca, cb = table5_small_pair()
    assert min_distance_exhaustive(ca) == 2  # codewords {000, 011}
    assert min_distance_exhaustive(cb) == 2  # even-weight code on 3 bits


def test_min_distance_zero_dim_is_undefined():
    # Parity = identity leaves only the zero codeword.
    code = ClassicalCode.from_parity(BinaryMatrix.identity(3))
    assert code.k == 0
    assert min_distance_exhaustive(code) is None


def test_min_distance_guard_on_large_k():
    g = BinaryMatrix.identity(25)
    h = BinaryMatrix.zeros(0, 25)
    code = ClassicalCode(g, h)
    with pytest.raises(CodeError, match="randomized"):
        min_distance_exhaustive(code)


def test_build_pair_dimensions():
    ca, cb = table5_small_pair()
    pair = build_pair(ca, cb)
    assert pair.c0_basis.n_rows == 2  # rho(1-rho)Delta^2 with rho=1/3, Delta=3
    assert pair.c1_basis.n_rows == 2
    assert pair.c0_basis.n_cols == 9
    assert abs(pair.rho - 1 / 3) < 1e-12


def test_build_pair_rejects_mismatched_lengths():
    ca = random_systematic(1, 3, np.random.default_rng(0))
    cb = random_systematic(2, 4, np.random.default_rng(0))
    with pytest.raises(CodeError, match="dimension mismatch"):
        build_pair(ca, cb)


def test_build_pair_rejects_bad_rate_split():
    rng = np.random.default_rng(0)
    ca = random_systematic(2, 4, rng)
    cb = random_systematic(1, 4, rng)  # k_A + k_B = 3 != 4
    with pytest.raises(CodeError, match="dimension mismatch"):
        build_pair(ca, cb)


def exhaustive_min_weight(basis: BinaryMatrix):
    best = None
    for mask in range(1, 1 << basis.n_rows):
        w = 0
        m = mask
        while m:
            low = m & -m
            w ^= basis.rows[low.bit_length() - 1]
            m ^= low
        wt = w.bit_count()
        if w and (best is None or wt < best):
            best = wt
    return best


def test_tensor_distance_multiplicativity_small_pairs():
    rng = np.random.default_rng(12)
    checked = 0
    while checked < 6:
        delta = int(rng.integers(3, 7))
        ka = int(rng.integers(1, delta))
        try:
            ca = random_systematic(ka, delta, rng)
            cb = random_systematic(delta - ka, delta, rng)
            pair = build_pair(ca, cb)
        except CodeError:
            continue
        da = min_distance_exhaustive(ca)
        db = min_distance_exhaustive(cb)
        d0 = exhaustive_min_weight(pair.c0_basis)
        assert d0 == da * db
        checked += 1


def test_delta5_pair_dimension():
    # k_A = 3, k_B = 2 at Delta = 5 gives dim(C0) = 6.
    rng = np.random.default_rng(3)
    ca = random_systematic(3, 5, rng)
    cb = random_systematic(2, 5, rng)
    pair = build_pair(ca, cb)
    assert pair.c0_basis.n_rows == 6
    assert pair.c1_basis.n_rows == 6


def test_reduce_basis_weights_preserves_span():
    rng = np.random.default_rng(21)
    m = BinaryMatrix.from_dense(rng.integers(0, 2, size=(4, 10)))
    while gf2.rank(m) != 4:
        m = BinaryMatrix.from_dense(rng.integers(0, 2, size=(4, 10)))
    reduced = reduce_basis_weights(m)
    assert gf2.rank(reduced) == 4
    for row in reduced.rows:
        assert gf2.is_in_rowspace(m, row)
    assert max(reduced.row_weights()) <= max(m.row_weights())


def test_code_json_round_trip():
    code = random_systematic(2, 5, np.random.default_rng(7))
    back = ClassicalCode.from_json(code.to_json())
    assert back.generator == code.generator
    assert back.parity == code.parity
