"""Logical error rate curves from Monte Carlo memory experiments.

Runs the 36-qubit instance across a range of physical rates under
phenomenological noise, appends rows to a results CSV, and prints the
per-round logical error rate with confidence intervals.  The companion
plotting tool renders such CSVs:

    node frontend/dist/cli.js --kind threshold-curves \
        --in demos/out/results.csv --out demos/out/fig.svg
"""

from pathlib import Path

from qtanner import NoiseModel, load_fixture
from qtanner.harness import MemoryRunner, append_results_csv

code = load_fixture("d4-36")
runner = MemoryRunner(code)
out = Path(__file__).parent / "out" / "results.csv"
out.unlink(missing_ok=True)

print(f"{'p':>8} {'L_X':>10} {'L_Z':>10} {'p_L':>10} {'ci':>9} {'shots':>7}")
results = []
for p in [0.002, 0.005, 0.01, 0.02, 0.04]:
    res = runner.run_adaptive(
        NoiseModel("phenomenological", p, rounds=3),
        seed=3,
        min_failures=150,
        max_shots=200_000,
    )
    results.append(res)
    print(
        f"{p:8.3f} {res.l_x:10.3g} {res.l_z:10.3g} {res.p_l:10.3g} "
        f"{res.ci:9.2g} {res.shots_x + res.shots_z:7d}"
    )

append_results_csv(out, results)
print(f"\nrows appended to {out}")
