import numpy as np
import pytest

from qtanner import gf2
from qtanner.gf2 import BinaryMatrix
from qtanner.groups import DihedralGroup, GeneratorSet, sample_tnc_pair
from qtanner.complexes import build_complex
from qtanner.codes import ClassicalCode, build_pair, random_systematic
from qtanner.qcode import (
    FIXTURES,
    QCodeError,
    build_tanner_code,
    compute_logicals,
    fixture_names,
    load_bundle,
    load_fixture,
    parameters,
    save_bundle,
)

TABLE_PARAMS = {
    "d4-36": (36, 8),
    "d6-54": (54, 11),
    "d8-72": (72, 14),
    "d8-200": (200, 10),
    "d10-250": (250, 10),
}


def test_fixture_names_cover_reference_instances():
    assert set(fixture_names()) == set(TABLE_PARAMS)


@pytest.mark.parametrize("name", ["d4-36", "d6-54", "d8-72"])
def test_small_fixture_parameters(name):
    code = load_fixture(name)
    n, k = TABLE_PARAMS[name]
    assert (code.n, code.k) == (n, k)
    code.validate()


def test_fixture_row_counts(code36):
    # |V0| * dim(C0) Z rows and |V1| * dim(C1) X rows: 8 * 2 = 16 each.
    assert code36.hz.n_rows == 16
    assert code36.hx.n_rows == 16


def test_fixture_rates(code36):
    p36 = parameters(code36)
    assert abs(p36["rate"] - 0.222) < 5e-4
    p200 = parameters(load_fixture("d8-200"))
    assert abs(p200["rate"] - 0.05) < 1e-12


def test_fixture_stabilizer_weights(code36):
    p = parameters(code36)
    assert set(p["z_row_weights"]) == {6}
    assert set(p["x_row_weights"]) == {6}
    p200 = parameters(load_fixture("d8-200"))
    assert p200["max_row_weight"] <= 25  # Delta^2
    assert set(p200["z_row_weights"]) | set(p200["x_row_weights"]) == {6, 8, 9, 12}


def test_commutation_exact(code36):
    assert code36.hx.matmul(code36.hz.transpose()).is_zero()


def test_qubit_count_formula(code36):
    g = code36.provenance
    assert code36.n == g["delta"] ** 2 * g["group_order"] // 2


def test_column_degree_bound(code36):
    stacked = code36.hx.vstack(code36.hz)
    rho = 1 / 3
    bound = 4 * rho * (1 - rho) * 9
    assert max(stacked.column_weights()) <= bound


def test_logical_bases_properties(code36):
    code = code36
    # In-kernel and out-of-stabilizer-span, pairing normalized to identity.
    for row in code.lx.rows:
        assert code.hz.mul_vec(row) == 0
        assert not gf2.is_in_rowspace(code.hx, row)
    for row in code.lz.rows:
        assert code.hx.mul_vec(row) == 0
        assert not gf2.is_in_rowspace(code.hz, row)
    pairing = code.lx.matmul(code.lz.transpose())
    assert pairing == BinaryMatrix.identity(code.k)


def test_rank_based_k_matches_stacked_identity(code36):
    # n - rank(H_X) - rank(H_Z) = 8 for the 36-qubit instance.
    assert 36 - gf2.rank(code36.hx) - gf2.rank(code36.hz) == 8


def test_reported_matrices_variant_differs():
    # The originally circulated check matrices build a valid CSS code
    # with different parameters (k = 9), which is why the seed codes
    # were reconstructed.
    code = load_fixture("d4-36", reported_matrices=True)
    assert code.n == 36 and code.k == 9


def test_mismatched_pair_delta_rejected():
    g = DihedralGroup(4)
    cx = build_complex(
        g,
        GeneratorSet.from_names(g, ["s", "r", "r^3"]),
        GeneratorSet.from_names(g, ["sr", "sr^3", "r^2"]),
    )
    rng = np.random.default_rng(0)
    pair = build_pair(random_systematic(2, 4, rng), random_systematic(2, 4, rng))
    with pytest.raises(QCodeError, match="block length"):
        build_tanner_code(cx, pair)


def test_random_instances_satisfy_structural_invariants():
    rng = np.random.default_rng(7)
    built = 0
    for gn, delta in [(6, 3), (8, 3), (8, 4), (10, 4)]:
        g = DihedralGroup(gn)
        for _ in range(3):
            try:
                ga, gb = sample_tnc_pair(g, delta, rng, max_retries=200)
            except Exception:
                continue
            ka = int(rng.integers(1, delta))
            ca = random_systematic(ka, delta, rng)
            cb = random_systematic(delta - ka, delta, rng)
            code = build_tanner_code(build_complex(g, ga, gb), build_pair(ca, cb))
            assert code.n == delta * delta * g.order // 2
            assert max(code.hx.row_weights() + code.hz.row_weights()) <= delta**2
            stacked = code.hx.vstack(code.hz)
            rho = ka / delta
            assert max(stacked.column_weights()) <= 4 * rho * (1 - rho) * delta**2
            code.validate()
            built += 1
    assert built >= 8


def test_compute_logicals_on_tiny_css_code():
    # Three-qubit dual rail: H_X = [1 1 1] and H_Z rank 2 leave k = 0.
    hx = BinaryMatrix.from_dense([[1, 1, 1]])
    hz = BinaryMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    lx, lz, k = compute_logicals(hx, hz)
    assert k == 0 and lx.n_rows == 0 and lz.n_rows == 0


def test_bundle_round_trip(tmp_path, code36):
    save_bundle(code36, tmp_path / "bundle")
    back = load_bundle(tmp_path / "bundle")
    assert back.hx == code36.hx
    assert back.hz == code36.hz
    assert back.lx == code36.lx
    assert back.lz == code36.lz
    assert back.provenance["fixture"] == "d4-36"


def test_unknown_fixture_errors():
    with pytest.raises(QCodeError, match="unknown fixture"):
        load_fixture("d3-18")
