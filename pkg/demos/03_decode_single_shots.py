"""Decode individual noisy shots with BP and OSD.

Builds a phenomenological decoding problem (noisy syndrome rounds plus
one perfect readout round), samples fault configurations, and walks
them through min-sum belief propagation with ordered-statistics
fallback.
"""

import numpy as np

from qtanner import DecoderConfig, SyndromeDecoder, build_phenomenological, load_fixture

code = load_fixture("d4-36")
stcm = build_phenomenological(code, component="x", p=0.02, rounds=3)
print(
    f"decoding problem: {stcm.n_detectors} detectors x {stcm.n_columns} fault "
    f"mechanisms ({code.n} qubits x 3 rounds of data errors + "
    f"{code.hx.n_rows} checks x 3 rounds of measurement errors)"
)

decoder = SyndromeDecoder(stcm.matrix, stcm.priors, DecoderConfig(max_iters=100))
action = stcm.logical_action.to_dense()

rng = np.random.default_rng(11)
stats = {"clean": 0, "bp": 0, "osd": 0, "failed": 0}
for shot in range(200):
    detectors, truth = stcm.sample_shot(rng)
    if not detectors.any():
        predicted = np.zeros_like(truth)
        stats["clean"] += 1
    else:
        e, bp = decoder.decode(detectors)
        stats["bp" if bp.converged else "osd"] += 1
        predicted = (action @ e) % 2
    if not np.array_equal(predicted, truth):
        stats["failed"] += 1

print(f"200 shots at p = 0.02: {stats}")
print("(a failure is any mismatch between predicted and true logical flips)")
