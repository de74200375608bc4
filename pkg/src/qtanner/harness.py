"""Memory experiments, statistics, pseudo-thresholds, sweeps, overhead.

Logical error rates are measured per component: an X-memory run counts
a failure whenever the decoder's predicted logical flips differ from
the true flips on any observable, and likewise for Z memory.  With
component failure rates L_X and L_Z over eta_x and eta_z shots, the
per-round logical error rate is

    p_L = (L_X + L_Z - L_X * L_Z) / N

and the half-width of the reported confidence interval is

    ci = (1.645 / sqrt(eta)) * sqrt(eta_s * eta_f / eta**2)

with eta = eta_x + eta_z shots, eta_f failures and eta_s successes.

Pseudo-thresholds solve for the break-even physical rate where the
per-round logical error rate crosses k*p (phenomenological, code
capacity) or T*k*p/10 (circuit level, T the measured depth of one
extraction round).  At break-even scale the linearized per-round form
combined/N is capped at 1/N and cannot reach k*p for the larger
instances, so the crossing uses the exact N-round conversion

    per_round(p) = 1 - (1 - combined(p)) ** (1/N),

which agrees with combined/N to first order in the regime where rates
are actually reported.

Shots use per-shot derived seeds, so failure counts are bit-exact
reproducible for any chunk size or worker count, and partial results
merge by summing counts.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .codes import CodeError, min_distance_exhaustive, random_systematic, build_pair
from .complexes import ComplexError, build_complex
from .decoder import DecoderConfig, SyndromeDecoder
from .distance import estimate_distance
from .groups import DihedralGroup, GroupError, sample_tnc_pair
from .noise import (
    CircuitFaultModel,
    NoiseModel,
    SpaceTimeCheckMatrix,
    build_circuit,
    build_code_capacity,
    build_phenomenological,
)
from .qcode import CssCode, build_tanner_code, QCodeError
from ._kernels import run_shots

__all__ = [
    "ExperimentResult",
    "ThresholdResult",
    "HarnessError",
    "MemoryRunner",
    "run_memory",
    "run_adaptive",
    "pseudo_threshold",
    "overhead",
    "k_copy_rate",
    "sweep_table2",
    "binomial_ci_half_width",
    "combined_rate",
    "append_results_csv",
    "read_results_csv",
    "CSV_COLUMNS",
    "SURFACE_CODE_REFERENCE",
    "OUTPUT_DIR_ENV",
]

OUTPUT_DIR_ENV = "QTANNER_OUTPUT_DIR"

CSV_COLUMNS = [
    "code",
    "model",
    "p",
    "rounds",
    "shots_x",
    "shots_z",
    "fails_x",
    "fails_z",
    "L_X",
    "L_Z",
    "p_L",
    "ci",
    "seed",
]

# Externally reported distance-d surface code figures used only for
# comparison plots: space-time overhead per logical qubit and logical
# error rates per logical qubit at p = 1e-3 (phenomenological and
# circuit level).  The codes have parameters [[d^2, 1, d]].
SURFACE_CODE_REFERENCE = {
    3: {"overhead_per_logical": 600, "pl_phenom": 3.0e-5, "pl_circuit": 6.9e-4},
    4: {"overhead_per_logical": 1568, "pl_phenom": 5.0e-6, "pl_circuit": 2.6e-4},
    5: {"overhead_per_logical": 3240, "pl_phenom": 8.0e-7, "pl_circuit": 4.8e-5},
    7: {"overhead_per_logical": 9464, "pl_phenom": 2.9e-9, "pl_circuit": 2.9e-6},
    9: {"overhead_per_logical": 20808, "pl_phenom": 2e-10, "pl_circuit": 1e-6},
    15: {"overhead_per_logical": 100920, "pl_phenom": 2.3e-18, "pl_circuit": 2.2e-10},
}

# Default decoder settings for experiments: BP capped at 100 iterations
# (the per-column default is impractical on space-time matrices; OSD
# covers non-converged shots).
EXPERIMENT_CONFIG = DecoderConfig(max_iters=100)

MIN_PRIOR = 1e-12


class HarnessError(ValueError):
    pass


def binomial_ci_half_width(shots: int, fails: int, z: float = 1.645) -> float:
    """(z / sqrt(eta)) * sqrt(eta_s * eta_f / eta^2) for eta shots."""
    if shots <= 0:
        return 0.0
    eta_s = shots - fails
    return (z / math.sqrt(shots)) * math.sqrt(eta_s * fails / shots**2)


def combined_rate(l_x: float, l_z: float) -> float:
    return l_x + l_z - l_x * l_z


def k_copy_rate(p_l: float, k: int) -> float:
    """Logical rate of k independent copies: 1 - (1 - p_L)^k."""
    return 1.0 - (1.0 - p_l) ** k


@dataclass
class ExperimentResult:
    code_id: str
    model: str
    p: float
    rounds: int
    shots_x: int
    shots_z: int
    fails_x: int
    fails_z: int
    seed: int
    seconds: float = 0.0
    bp_failures: int = 0

    @property
    def l_x(self) -> float:
        return self.fails_x / self.shots_x if self.shots_x else 0.0

    @property
    def l_z(self) -> float:
        return self.fails_z / self.shots_z if self.shots_z else 0.0

    @property
    def combined(self) -> float:
        return combined_rate(self.l_x, self.l_z)

    @property
    def p_l(self) -> float:
        return self.combined / self.rounds

    @property
    def per_round(self) -> float:
        """Exact per-round rate 1 - (1 - combined)^(1/N)."""
        return 1.0 - (1.0 - self.combined) ** (1.0 / self.rounds)

    @property
    def ci(self) -> float:
        return binomial_ci_half_width(
            self.shots_x + self.shots_z, self.fails_x + self.fails_z
        )

    def to_csv_row(self) -> list:
        return [
            self.code_id,
            self.model,
            f"{self.p:.10g}",
            self.rounds,
            self.shots_x,
            self.shots_z,
            self.fails_x,
            self.fails_z,
            f"{self.l_x:.8g}",
            f"{self.l_z:.8g}",
            f"{self.p_l:.8g}",
            f"{self.ci:.8g}",
            self.seed,
        ]


def append_results_csv(path, results) -> Path:
    path = Path(path)
    new = not path.exists()
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", newline="") as fh:
        writer = csv.writer(fh)
        if new:
            writer.writerow(CSV_COLUMNS)
        for r in results:
            writer.writerow(r.to_csv_row())
    return path


def read_results_csv(path) -> list[dict]:
    with Path(path).open() as fh:
        return list(csv.DictReader(fh))


# ── shot farm ─────────────────────────────────────────────────────────


class _ComponentProblem:
    """Decoder-ready arrays for one (component, noise-kind) problem."""

    def __init__(self, stcm: SpaceTimeCheckMatrix, config: DecoderConfig):
        if stcm.logical_action.n_rows > 64:
            raise HarnessError("more than 64 logical observables unsupported")
        priors = np.clip(stcm.priors, MIN_PRIOR, 0.5)
        self.decoder = SyndromeDecoder(stcm.matrix, priors, config)
        self.det_cols = self.decoder.packed_cols
        act = np.zeros(stcm.n_columns, dtype=np.uint64)
        for r, row in enumerate(stcm.logical_action.rows):
            t = row
            while t:
                low = t & -t
                act[low.bit_length() - 1] |= np.uint64(1) << np.uint64(r)
                t ^= low
        self.act_cols = act
        self.thresholds = (stcm.priors * float(2**64)).astype(np.uint64)
        self.stcm = stcm

    def run(self, seed: int, shot_start: int, shots: int) -> tuple[int, int, int]:
        dec = self.decoder
        lam = (
            dec.config.osd_order
            if dec.config.osd_strategy == "combination-sweep"
            else 0
        )
        lam = min(lam, dec.n - dec.rank)
        return run_shots(
            self.det_cols,
            self.act_cols,
            self.thresholds,
            dec.check_ptr,
            dec.edge_var,
            dec.var_ptr,
            dec.var_edge,
            dec.prior_llr,
            float(dec.config.alpha),
            int(dec.max_iters),
            int(lam),
            True,
            int(dec.rank),
            np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
            int(shot_start),
            int(shots),
        )


class MemoryRunner:
    """Cached per-code problem builder for repeated experiment calls.

    Circuit fault enumeration is p-independent, so the fault model is
    built once per (component, rounds) and only priors are reassembled
    when the physical rate changes.
    """

    def __init__(self, code: CssCode, code_id: str = ""):
        self.code = code
        self.code_id = code_id or code.provenance.get("fixture", "code")
        self._fault_models: dict = {}
        self._problems: dict = {}

    def problem(self, component: str, noise: NoiseModel, config: DecoderConfig) -> _ComponentProblem:
        key = (component, noise.kind, noise.rounds, noise.p, noise.gate_noise, config)
        if key in self._problems:
            return self._problems[key]
        if noise.kind == "circuit":
            fm_key = (component, noise.rounds, noise.gate_noise)
            if fm_key not in self._fault_models:
                circuit = build_circuit(self.code, component, noise.rounds)
                self._fault_models[fm_key] = CircuitFaultModel(
                    circuit, self.code, noise.gate_noise
                )
            stcm = self._fault_models[fm_key].to_checkmatrix(noise.p, noise.idle_factor)
        elif noise.kind == "phenomenological":
            stcm = build_phenomenological(self.code, component, noise.p, noise.rounds)
        else:
            stcm = build_code_capacity(self.code, component, noise.p)
        prob = _ComponentProblem(stcm, config)
        if len(self._problems) > 8:
            self._problems.clear()
        self._problems[key] = prob
        return prob

    def circuit_depth(self, noise: NoiseModel) -> int:
        fm_key = ("x", noise.rounds, noise.gate_noise)
        if fm_key not in self._fault_models:
            circuit = build_circuit(self.code, "x", noise.rounds)
            self._fault_models[fm_key] = CircuitFaultModel(
                circuit, self.code, noise.gate_noise
            )
        return self._fault_models[fm_key].circuit.depth_per_round

    def run(
        self,
        noise: NoiseModel,
        shots: int,
        seed: int,
        config: Optional[DecoderConfig] = None,
        shot_start: int = 0,
    ) -> ExperimentResult:
        config = config or EXPERIMENT_CONFIG
        t0 = time.time()
        counts = {}
        bp_failures = 0
        if noise.p == 0.0:
            counts["x"] = (0, shots)
            counts["z"] = (0, shots)
        else:
            for comp in ("x", "z"):
                prob = self.problem(comp, noise, config)
                fails, _, bpf = prob.run(
                    seed + (0 if comp == "x" else 0x5A17), shot_start, shots
                )
                counts[comp] = (fails, shots)
                bp_failures += bpf
        return ExperimentResult(
            self.code_id,
            noise.kind,
            noise.p,
            noise.rounds,
            counts["x"][1],
            counts["z"][1],
            counts["x"][0],
            counts["z"][0],
            seed,
            time.time() - t0,
            bp_failures,
        )

    def run_adaptive(
        self,
        noise: NoiseModel,
        seed: int,
        config: Optional[DecoderConfig] = None,
        min_failures: int = 100,
        max_shots: int = 10_000_000,
        chunk: int = 2000,
    ) -> ExperimentResult:
        """Sample until >= min_failures combined failures or the shot cap."""
        config = config or EXPERIMENT_CONFIG
        t0 = time.time()
        shots = 0
        fails = {"x": 0, "z": 0}
        bp_failures = 0
        if noise.p > 0.0:
            probs = {c: self.problem(c, noise, config) for c in ("x", "z")}
            while shots < max_shots:
                batch = min(chunk, max_shots - shots)
                for comp in ("x", "z"):
                    f, _, bpf = probs[comp].run(
                        seed + (0 if comp == "x" else 0x5A17), shots, batch
                    )
                    fails[comp] += f
                    bp_failures += bpf
                shots += batch
                if fails["x"] + fails["z"] >= min_failures:
                    break
                chunk = min(2 * chunk, 200_000)
        else:
            shots = max_shots
        return ExperimentResult(
            self.code_id,
            noise.kind,
            noise.p,
            noise.rounds,
            shots,
            shots,
            fails["x"],
            fails["z"],
            seed,
            time.time() - t0,
            bp_failures,
        )


def run_memory(
    code: CssCode,
    noise: NoiseModel,
    shots: int,
    seed: int,
    config: Optional[DecoderConfig] = None,
    code_id: str = "",
) -> ExperimentResult:
    """Build both component problems, sample, decode, and aggregate."""
    return MemoryRunner(code, code_id).run(noise, shots, seed, config)


def run_adaptive(
    code: CssCode,
    noise: NoiseModel,
    seed: int,
    config: Optional[DecoderConfig] = None,
    min_failures: int = 100,
    max_shots: int = 10_000_000,
    code_id: str = "",
) -> ExperimentResult:
    return MemoryRunner(code, code_id).run_adaptive(
        noise, seed, config, min_failures, max_shots
    )


# ── pseudo-thresholds ─────────────────────────────────────────────────


@dataclass
class ThresholdResult:
    p_star: float
    kind: str
    target: str
    rounds: int
    curve: list = field(default_factory=list)  # (p, combined, ci) samples

    def to_json(self) -> str:
        return json.dumps(
            {
                "p_star": self.p_star,
                "kind": self.kind,
                "target": self.target,
                "rounds": self.rounds,
                "curve": self.curve,
            }
        )


def _threshold_target(kind: str, k: int, depth: Optional[int]):
    if kind == "circuit":
        if depth is None:
            raise HarnessError("circuit threshold needs the measured round depth")
        return f"{depth}*{k}*p/10", lambda p: depth * k * p / 10.0
    return f"{k}*p", lambda p: k * p


def pseudo_threshold(
    code: CssCode,
    kind: str,
    rounds: int,
    bracket: tuple[float, float],
    seed: int,
    config: Optional[DecoderConfig] = None,
    rel_width: float = 0.10,
    min_failures: int = 300,
    max_shots: int = 200_000,
    gate_noise: str = "paired",
    code_id: str = "",
) -> ThresholdResult:
    """Bisection on log p for the break-even point per_round(p) = target(p).

    Requires a sign change of per_round(p) - target(p) across the
    bracket; otherwise raises with the sampled diagnostic curve.
    """
    runner = MemoryRunner(code, code_id)
    depth = None
    if kind == "circuit":
        depth = runner.circuit_depth(NoiseModel("circuit", 0.001, rounds, gate_noise=gate_noise))
    target_desc, target = _threshold_target(kind, code.k, depth)
    curve: list = []

    def sample(p: float) -> float:
        noise = NoiseModel(kind, p, rounds, gate_noise=gate_noise)
        res = runner.run_adaptive(
            noise, seed, config, min_failures=min_failures, max_shots=max_shots
        )
        curve.append((p, res.per_round, res.ci))
        return res.per_round - target(p)

    lo, hi = bracket
    if not 0 < lo < hi:
        raise HarnessError("invalid bracket")
    f_lo, f_hi = sample(lo), sample(hi)
    if f_lo == 0:
        return ThresholdResult(lo, kind, target_desc, rounds, curve)
    if f_hi == 0:
        return ThresholdResult(hi, kind, target_desc, rounds, curve)
    if (f_lo > 0) == (f_hi > 0):
        raise HarnessError(
            f"no sign change of per_round(p) - {target_desc} in bracket "
            f"[{lo}, {hi}]; diagnostic curve: {curve}"
        )
    while hi / lo > 1.0 + rel_width:
        mid = math.sqrt(lo * hi)
        f_mid = sample(mid)
        if f_mid == 0:
            lo = hi = mid
            break
        if (f_mid > 0) == (f_hi > 0):
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    return ThresholdResult(math.sqrt(lo * hi), kind, target_desc, rounds, curve)


# ── overhead ──────────────────────────────────────────────────────────


def overhead(code: CssCode, rounds: int) -> dict:
    """Space-time overhead (n + n_anc)(d_x + d_z) * rounds.

    n_anc counts one ancilla per stabilizer row; d_x and d_z are the
    maximum row or column weights of the respective check matrices.
    The reference per-logical values stored with the bundled instances
    follow a different (unstated) ancilla or depth convention and do
    not match this formula; both numbers are reported side by side.
    """
    n_anc = code.hx.n_rows + code.hz.n_rows
    d_x = max(code.hx.row_weights() + code.hx.column_weights())
    d_z = max(code.hz.row_weights() + code.hz.column_weights())
    total = (code.n + n_anc) * (d_x + d_z) * rounds
    ref = code.provenance.get("reference", {}).get("overhead_per_logical")
    return {
        "n": code.n,
        "n_anc": n_anc,
        "d_x": d_x,
        "d_z": d_z,
        "rounds": rounds,
        "space_time": total,
        "per_logical": total / code.k if code.k else math.inf,
        "reference_per_logical": ref,
        "matches_reference": (
            ref is not None and abs(total / code.k - ref) < 0.5 if code.k else False
        ),
    }


# ── parameter sweep ───────────────────────────────────────────────────


def sweep_table2(
    group_orders: list[int],
    deltas: list[int],
    distance_targets: list[tuple[int, int]],
    instances: int,
    seed: int,
    trials: int = 2000,
    max_attempts: int = 400,
) -> dict:
    """Max quantum distance per (delta, d_A, d_B) cell over random instances.

    For each cell, random symmetric generator pairs and random
    systematic seed codes (random split k_A + k_B = delta) are drawn;
    codes built successfully with k > 0 contribute their estimated
    distance.  Cells where no attempt produced a valid code map to None.
    """
    rng = np.random.default_rng(seed)
    cells: dict = {}
    for delta in deltas:
        for d_a, d_b in distance_targets:
            best = None
            produced = 0
            for _ in range(instances):
                built = None
                for _ in range(max_attempts):
                    gn = int(rng.choice(group_orders))
                    group = DihedralGroup(gn)
                    if delta >= group.order // 2 or (gn % 2 and delta % 2):
                        continue
                    k_a = int(rng.integers(1, delta))
                    try:
                        ca = random_systematic(k_a, delta, rng)
                        cb = random_systematic(delta - k_a, delta, rng)
                    except CodeError:
                        continue
                    if (
                        min_distance_exhaustive(ca) != d_a
                        or min_distance_exhaustive(cb) != d_b
                    ):
                        continue
                    try:
                        ga, gb = sample_tnc_pair(group, delta, rng, max_retries=60)
                        code = build_tanner_code(
                            build_complex(group, ga, gb), build_pair(ca, cb)
                        )
                    except (GroupError, ComplexError, QCodeError, CodeError):
                        continue
                    if code.k <= 0:
                        continue
                    built = code
                    break
                if built is None:
                    continue
                produced += 1
                est = estimate_distance(
                    built, trials=trials, seed=int(rng.integers(2**62))
                )
                if best is None or est.d_upper > best:
                    best = est.d_upper
            cells[(delta, d_a, d_b)] = best if produced else None
    return cells


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))
