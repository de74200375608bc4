import math
import os

import numpy as np
import pytest

from qtanner.harness import (
    CSV_COLUMNS,
    SURFACE_CODE_REFERENCE,
    ExperimentResult,
    HarnessError,
    MemoryRunner,
    append_results_csv,
    binomial_ci_half_width,
    combined_rate,
    default_output_dir,
    k_copy_rate,
    overhead,
    pseudo_threshold,
    read_results_csv,
    run_adaptive,
    run_memory,
    sweep_table2,
)
from qtanner.noise import NoiseModel


def test_ci_formula_symbolic():
    # ci = (1.645/sqrt(eta)) * sqrt(eta_s * eta_f / eta^2)
    eta, eta_f = 4000, 37
    eta_s = eta - eta_f
    expected = (1.645 / math.sqrt(eta)) * math.sqrt(eta_s * eta_f / eta**2)
    assert binomial_ci_half_width(eta, eta_f) == pytest.approx(expected, rel=1e-15)
    res = ExperimentResult("c", "phenomenological", 0.01, 3, 2000, 2000, 20, 17, 0)
    assert res.ci == pytest.approx(binomial_ci_half_width(4000, 37), rel=1e-15)


def test_combined_rate_equation_machine_precision():
    rng = np.random.default_rng(0)
    for _ in range(100):
        lx, lz = rng.random(), rng.random()
        res = ExperimentResult(
            "c", "phenomenological", 0.01, 4, 10**6, 10**6,
            int(lx * 10**6), int(lz * 10**6), 0,
        )
        expect = (res.l_x + res.l_z - res.l_x * res.l_z) / 4
        assert res.p_l == pytest.approx(expect, rel=0, abs=0)


def test_zero_noise_gives_zero_rate(code36):
    res = run_memory(code36, NoiseModel("phenomenological", 0.0, rounds=3), 100, seed=0)
    assert res.p_l == 0.0 and res.fails_x == res.fails_z == 0


def test_run_memory_reproducible(code36):
    noise = NoiseModel("phenomenological", 0.02, rounds=3)
    a = run_memory(code36, noise, 3000, seed=5)
    b = run_memory(code36, noise, 3000, seed=5)
    assert (a.fails_x, a.fails_z) == (b.fails_x, b.fails_z)


def test_run_memory_chunking_invariance(code36):
    # Summing two half-runs with the derived-seed contract reproduces
    # one full run exactly.
    noise = NoiseModel("phenomenological", 0.02, rounds=3)
    runner = MemoryRunner(code36)
    full = runner.run(noise, 2000, seed=77)
    part1 = runner.run(noise, 1000, seed=77, shot_start=0)
    part2 = runner.run(noise, 1000, seed=77, shot_start=1000)
    assert full.fails_x == part1.fails_x + part2.fails_x
    assert full.fails_z == part1.fails_z + part2.fails_z


def test_adaptive_reaches_failure_floor(code36):
    noise = NoiseModel("phenomenological", 0.04, rounds=3)
    res = run_adaptive(code36, noise, seed=3, min_failures=50, max_shots=50_000)
    assert res.fails_x + res.fails_z >= 50


def test_threshold_requires_sign_change(code36):
    with pytest.raises(HarnessError, match="no sign change"):
        pseudo_threshold(
            code36,
            "phenomenological",
            rounds=3,
            bracket=(1e-4, 3e-4),
            seed=0,
            min_failures=20,
            max_shots=4000,
        )


def test_overhead_formula(code36):
    report = overhead(code36, rounds=3)
    assert report["n"] == 36
    assert report["n_anc"] == 32
    expected = (36 + 32) * (report["d_x"] + report["d_z"]) * 3
    assert report["space_time"] == expected
    assert report["per_logical"] == pytest.approx(expected / 8)
    # The externally reported value follows a different convention and is
    # surfaced, not silently matched.
    assert report["reference_per_logical"] == 612
    assert report["matches_reference"] is False


def test_k_copy_rate():
    assert k_copy_rate(0.0, 10) == 0.0
    assert k_copy_rate(8.0e-7, 10) == pytest.approx(8.0e-6, rel=1e-3)
    assert k_copy_rate(0.5, 2) == pytest.approx(0.75)


def test_surface_reference_table_sane():
    assert SURFACE_CODE_REFERENCE[3]["overhead_per_logical"] == 600
    assert SURFACE_CODE_REFERENCE[15]["pl_circuit"] == pytest.approx(2.2e-10)


def test_csv_round_trip(tmp_path):
    res = ExperimentResult("d4-36", "phenomenological", 0.01, 3, 100, 100, 3, 4, 9)
    path = append_results_csv(tmp_path / "results.csv", [res])
    rows = read_results_csv(path)
    assert list(rows[0].keys()) == CSV_COLUMNS
    assert rows[0]["code"] == "d4-36"
    assert int(rows[0]["fails_x"]) == 3
    append_results_csv(path, [res])
    assert len(read_results_csv(path)) == 2


def test_sweep_small_cells():
    cells = sweep_table2([6, 8], [3], [(1, 1)], instances=4, seed=11, trials=400)
    val = cells[(3, 1, 1)]
    assert val == 1  # weight-1 classical words leave weight-1 logicals


def test_sweep_monotone_in_instances():
    a = sweep_table2([8], [3], [(2, 2)], instances=2, seed=4, trials=400)
    b = sweep_table2([8], [3], [(2, 2)], instances=6, seed=4, trials=400)
    if a[(3, 2, 2)] is not None and b[(3, 2, 2)] is not None:
        assert b[(3, 2, 2)] >= a[(3, 2, 2)]


def test_default_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("QTANNER_OUTPUT_DIR", str(tmp_path))
    assert default_output_dir() == tmp_path
    monkeypatch.delenv("QTANNER_OUTPUT_DIR")
    assert str(default_output_dir()) == "."


def test_code_capacity_failure_rate_scales_quadratically(code36):
    # d = 3: weight-2 fault patterns dominate at low p, so the combined
    # rate scales as p^2; fitted log-log slope within 2 +- 0.3.
    import math

    runner = MemoryRunner(code36)
    p_lo, p_hi = 0.004, 0.016
    r_lo = runner.run(NoiseModel("code-capacity", p_lo), shots=120_000, seed=31)
    r_hi = runner.run(NoiseModel("code-capacity", p_hi), shots=40_000, seed=31)
    slope = math.log(r_hi.combined / r_lo.combined) / math.log(p_hi / p_lo)
    assert 1.7 <= slope <= 2.3, f"slope {slope:.2f}"


def test_injected_logical_operator_counts_as_failure(code36):
    # An error equal to a logical operator has zero syndrome; the decoder
    # predicts no flips while the true action is nonzero.
    import numpy as np

    from qtanner.noise import build_code_capacity
    from qtanner.decoder import SyndromeDecoder

    stcm = build_code_capacity(code36, "z", 0.01)
    h = stcm.matrix.to_dense()
    action = stcm.logical_action.to_dense()
    e = np.zeros(code36.n, dtype=np.uint8)
    for q in range(code36.n):
        if (code36.lx.rows[0] >> q) & 1:
            e[q] = 1
    syndrome = (h @ e) % 2
    assert not syndrome.any()
    truth = (action @ e) % 2
    assert truth.any()
    dec = SyndromeDecoder(stcm.matrix, stcm.priors)
    predicted, _ = dec.decode(syndrome)
    assert not np.array_equal((action @ predicted) % 2, truth)
