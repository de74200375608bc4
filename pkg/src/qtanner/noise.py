"""Decoding problems for code-capacity, phenomenological, and
circuit-level noise.

Every noise setting reduces to one object, the space-time check matrix:
a detector matrix over fault-mechanism columns, a prior per column, and
a logical-action matrix.  Shots sample columns independently by prior;
the decoder sees D @ f and is judged against action @ f.

Components are decoded separately, CSS-style:

* component ``"x"``: data initialized in the X basis, Z-type errors,
  checks from H_X, logical action from the X logicals;
* component ``"z"``: the symmetric problem (X errors against H_Z).

Phenomenological detectors use the difference convention: rounds
1..N are compared with the previous round (round 0 reads an ideal zero
syndrome), and one extra detector round compares the noiseless final
data readout with round N.  A data error in round t therefore flips
round-t detectors only; a measurement error at round t flips rounds t
and t+1; the final reconstruction round has no measurement errors.

Circuit-level problems are generated from an explicit syndrome
extraction circuit (one ancilla per check row, CX gates scheduled by
proper edge coloring, per-round depth at most d_x + d_z + 4) and a
Pauli-frame simulation of every single-fault mechanism: prior ``p``
after each two-qubit gate and each reset, ``p/10`` per idle timestep.
The two-qubit gate fault is aggregated by default into one mechanism
flipping both qubit frames ("paired"); ``gate_noise="split"`` instead
enumerates the three nontrivial single-component patterns at prior p
each.  Columns with identical (detector signature, logical action) are
merged with XOR-combined priors.

Circuit text format: one op per line, ``<timestep> <kind> <qubit...>``,
kinds RZ, RX, CX (control target), MZ, MX, IDLE, MD; lines are ordered
by timestep.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .gf2 import BinaryMatrix
from .qcode import CssCode

__all__ = [
    "NoiseModel",
    "SpaceTimeCheckMatrix",
    "Circuit",
    "Op",
    "NoiseError",
    "build_code_capacity",
    "build_phenomenological",
    "build_circuit",
    "CircuitFaultModel",
    "circuit_to_checkmatrix",
]

IDLE_FACTOR = 0.1


class NoiseError(ValueError):
    pass


@dataclass(frozen=True)
class NoiseModel:
    """Noise setting: kind, physical rate, rounds, and circuit options."""

    kind: str  # 'code-capacity' | 'phenomenological' | 'circuit'
    p: float
    rounds: int = 1
    idle_factor: float = IDLE_FACTOR
    gate_noise: str = "paired"  # or 'split'

    def __post_init__(self):
        if self.kind not in ("code-capacity", "phenomenological", "circuit"):
            raise NoiseError(f"unknown noise kind {self.kind!r}")
        if not 0.0 <= self.p < 0.5:
            raise NoiseError("p must lie in [0, 0.5)")
        if self.rounds < 1:
            raise NoiseError("rounds must be >= 1")
        if self.gate_noise not in ("paired", "split"):
            raise NoiseError(f"unknown gate noise mode {self.gate_noise!r}")


@dataclass
class SpaceTimeCheckMatrix:
    """Detector matrix, per-column priors, and logical action."""

    matrix: BinaryMatrix
    priors: np.ndarray
    logical_action: BinaryMatrix
    column_meta: list
    kind: str
    component: str
    rounds: int
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.matrix.n_cols != len(self.priors):
            raise NoiseError("one prior per column required")
        if self.logical_action.n_cols != self.matrix.n_cols:
            raise NoiseError("logical action column count mismatch")

    @property
    def n_detectors(self) -> int:
        return self.matrix.n_rows

    @property
    def n_columns(self) -> int:
        return self.matrix.n_cols

    def sample_shot(self, rng: np.random.Generator):
        """Independent per-column faults; returns (detectors, logical flips)."""
        f = rng.random(self.n_columns) < self.priors
        det = 0
        act = 0
        for c in np.nonzero(f)[0]:
            det ^= self._col_det(int(c))
            act ^= self._col_act(int(c))
        outcome = np.zeros(self.n_detectors, dtype=np.uint8)
        flips = np.zeros(self.logical_action.n_rows, dtype=np.uint8)
        for r in range(self.n_detectors):
            outcome[r] = (det >> r) & 1
        for r in range(self.logical_action.n_rows):
            flips[r] = (act >> r) & 1
        return outcome, flips

    def _col_det(self, c: int) -> int:
        out = 0
        for r, row in enumerate(self.matrix.rows):
            if (row >> c) & 1:
                out |= 1 << r
        return out

    def _col_act(self, c: int) -> int:
        out = 0
        for r, row in enumerate(self.logical_action.rows):
            if (row >> c) & 1:
                out |= 1 << r
        return out

    def save(self, directory):
        path = Path(directory)
        path.mkdir(parents=True, exist_ok=True)
        (path / "detectors.alist").write_text(self.matrix.to_alist())
        (path / "logical_action.alist").write_text(self.logical_action.to_alist())
        (path / "priors.json").write_text(
            json.dumps(
                {
                    "kind": self.kind,
                    "component": self.component,
                    "rounds": self.rounds,
                    "priors": self.priors.tolist(),
                    "source": self.source,
                },
                indent=2,
            )
        )
        return path

    @classmethod
    def load(cls, directory) -> "SpaceTimeCheckMatrix":
        path = Path(directory)
        meta = json.loads((path / "priors.json").read_text())
        return cls(
            BinaryMatrix.from_alist((path / "detectors.alist").read_text()),
            np.asarray(meta["priors"], dtype=np.float64),
            BinaryMatrix.from_alist((path / "logical_action.alist").read_text()),
            [None] * len(meta["priors"]),
            meta["kind"],
            meta["component"],
            meta["rounds"],
            meta.get("source", {}),
        )


def _component_matrices(code: CssCode, component: str):
    if component == "x":
        return code.hx, code.lx
    if component == "z":
        return code.hz, code.lz
    raise NoiseError(f"component must be 'x' or 'z', got {component!r}")


def build_code_capacity(code: CssCode, component: str, p: float) -> SpaceTimeCheckMatrix:
    """Single perfect syndrome round: detectors are the check matrix itself."""
    h, logical = _component_matrices(code, component)
    meta = [("data", q, 0) for q in range(code.n)]
    return SpaceTimeCheckMatrix(
        h.copy(),
        np.full(code.n, p, dtype=np.float64),
        logical.copy(),
        meta,
        "code-capacity",
        component,
        1,
    )


def build_phenomenological(
    code: CssCode, component: str, p: float, rounds: int
) -> SpaceTimeCheckMatrix:
    """Noisy data and measurements for N rounds plus a perfect readout round."""
    if rounds < 1:
        raise NoiseError("rounds must be >= 1")
    h, logical = _component_matrices(code, component)
    m, n = h.n_rows, h.n_cols
    n_det = m * (rounds + 1)
    cols = []
    actions = []
    meta = []
    col_checks = [[] for _ in range(n)]
    for r in range(m):
        for q in h.row_support(r):
            col_checks[q].append(r)
    logical_cols = logical.transpose()
    for t in range(rounds):
        for q in range(n):
            det = 0
            for c in col_checks[q]:
                det |= 1 << (t * m + c)
            cols.append(det)
            actions.append(logical_cols.rows[q])
            meta.append(("data", q, t))
    for t in range(rounds):
        for c in range(m):
            cols.append((1 << (t * m + c)) | (1 << ((t + 1) * m + c)))
            actions.append(0)
            meta.append(("measurement", c, t))
    # Columns were built as detector bitsets; transpose into row form.
    det_rows = [0] * n_det
    for j, det in enumerate(cols):
        while det:
            low = det & -det
            det_rows[low.bit_length() - 1] |= 1 << j
            det ^= low
    matrix = BinaryMatrix(n_det, len(cols), det_rows)
    act_rows = [0] * logical.n_rows
    for j, act in enumerate(actions):
        while act:
            low = act & -act
            act_rows[low.bit_length() - 1] |= 1 << j
            act ^= low
    action = BinaryMatrix(logical.n_rows, len(cols), act_rows)
    return SpaceTimeCheckMatrix(
        matrix,
        np.full(len(cols), p, dtype=np.float64),
        action,
        meta,
        "phenomenological",
        component,
        rounds,
    )


# ── syndrome extraction circuits ──────────────────────────────────────


@dataclass(frozen=True)
class Op:
    t: int
    kind: str  # RZ RX CX MZ MX IDLE MD
    qubits: tuple[int, ...]


@dataclass
class Circuit:
    """Timestep-ordered syndrome extraction circuit for one component.

    Data qubits are 0..n-1, Z-check ancillas follow, then X-check
    ancillas.  Each round measures every Z stabilizer then every X
    stabilizer; the final timestep destructively measures all data
    qubits in the memory basis (noiseless).
    """

    n_data: int
    n_z: int
    n_x: int
    rounds: int
    component: str
    ops: list[Op]
    depth_per_round: int

    @property
    def n_qubits(self) -> int:
        return self.n_data + self.n_z + self.n_x

    def validate(self):
        seen = {}
        for op in self.ops:
            for q in op.qubits:
                key = (op.t, q)
                if key in seen:
                    raise NoiseError(f"qubit {q} acted on twice at timestep {op.t}")
                seen[key] = op.kind

    def to_text(self) -> str:
        lines = [
            f"# data={self.n_data} z_anc={self.n_z} x_anc={self.n_x} "
            f"rounds={self.rounds} component={self.component} depth={self.depth_per_round}"
        ]
        for op in sorted(self.ops, key=lambda o: (o.t, o.kind, o.qubits)):
            lines.append(f"{op.t} {op.kind} " + " ".join(str(q) for q in op.qubits))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        header, *rest = [l for l in text.splitlines() if l.strip()]
        fields = dict(kv.split("=") for kv in header.lstrip("# ").split())
        ops = []
        for line in rest:
            parts = line.split()
            ops.append(Op(int(parts[0]), parts[1], tuple(int(q) for q in parts[2:])))
        return cls(
            int(fields["data"]),
            int(fields["z_anc"]),
            int(fields["x_anc"]),
            int(fields["rounds"]),
            fields["component"],
            ops,
            int(fields["depth"]),
        )


def _edge_coloring(edges: list[tuple[int, int]], n_left: int, n_right: int) -> list[int]:
    """Proper edge coloring of a bipartite graph with max-degree colors.

    Alternating-path insertion: each new edge takes the first color free
    at both endpoints; when the two endpoints disagree, the maximal
    two-color path from the right endpoint is flipped first.  Bipartite
    graphs always fit in max-degree colors this way.
    """
    deg_l = [0] * n_left
    deg_r = [0] * n_right
    for u, v in edges:
        deg_l[u] += 1
        deg_r[v] += 1
    degree = max(deg_l + deg_r, default=0)
    at_left = [[-1] * degree for _ in range(n_left)]
    at_right = [[-1] * degree for _ in range(n_right)]
    color = [-1] * len(edges)

    for ei, (u, v) in enumerate(edges):
        ca = at_left[u].index(-1)
        cb = at_right[v].index(-1)
        if ca != cb:
            # Maximal path from v alternating colors (ca, cb).
            path = []
            node, on_left, want = v, False, ca
            while True:
                slots = at_left[node] if on_left else at_right[node]
                e2 = slots[want]
                if e2 < 0:
                    break
                path.append(e2)
                uu, vv = edges[e2]
                node = vv if on_left else uu
                on_left = not on_left
                want = cb if want == ca else ca
            for e2 in path:
                uu, vv = edges[e2]
                at_left[uu][color[e2]] = -1
                at_right[vv][color[e2]] = -1
            for e2 in path:
                uu, vv = edges[e2]
                color[e2] = cb if color[e2] == ca else ca
                if at_left[uu][color[e2]] >= 0 or at_right[vv][color[e2]] >= 0:
                    raise NoiseError("edge coloring internal conflict")
                at_left[uu][color[e2]] = e2
                at_right[vv][color[e2]] = e2
        color[ei] = ca
        if at_left[u][ca] >= 0 or at_right[v][ca] >= 0:
            raise NoiseError("edge coloring internal conflict")
        at_left[u][ca] = ei
        at_right[v][ca] = ei
    return color


def build_circuit(
    code: CssCode, component: str, rounds: int, schedule: str = "edge-coloring"
) -> Circuit:
    """Generate the per-round Z-phase + X-phase extraction circuit.

    Gates within a phase are grouped into CX layers by proper edge
    coloring of the check-qubit incidence graph (deterministic insertion
    order: check index, then qubit index), so the per-round depth is at
    most d_x + d_z plus four prep/measure steps.  Idle markers cover
    every untouched qubit at every timestep except the noiseless final
    readout.
    """
    if schedule != "edge-coloring":
        raise NoiseError(f"unknown schedule {schedule!r}")
    if component not in ("x", "z"):
        raise NoiseError("component must be 'x' or 'z'")
    n = code.n
    mz, mx = code.hz.n_rows, code.hx.n_rows
    zoff, xoff = n, n + mz

    def layers(h: BinaryMatrix):
        edges = []
        for r in range(h.n_rows):
            for q in h.row_support(r):
                edges.append((r, q))
        colors = _edge_coloring(edges, h.n_rows, n)
        n_colors = max(colors) + 1 if colors else 0
        out = [[] for _ in range(n_colors)]
        for (r, q), c in zip(edges, colors):
            out[c].append((r, q))
        return out

    z_layers = layers(code.hz)
    x_layers = layers(code.hx)
    depth = len(z_layers) + len(x_layers) + 4

    ops: list[Op] = []
    busy: dict[int, set[int]] = {}

    def emit(t, kind, qubits):
        ops.append(Op(t, kind, tuple(qubits)))
        busy.setdefault(t, set()).update(qubits)

    for rd in range(rounds):
        t0 = rd * depth
        for c in range(mz):
            emit(t0, "RZ", (zoff + c,))
        for li, layer in enumerate(z_layers):
            for r, q in sorted(layer):
                emit(t0 + 1 + li, "CX", (q, zoff + r))
        t_mz = t0 + 1 + len(z_layers)
        for c in range(mz):
            emit(t_mz, "MZ", (zoff + c,))
        t_rx = t_mz + 1
        for c in range(mx):
            emit(t_rx, "RX", (xoff + c,))
        for li, layer in enumerate(x_layers):
            for r, q in sorted(layer):
                emit(t_rx + 1 + li, "CX", (xoff + r, q))
        t_mx = t_rx + 1 + len(x_layers)
        for c in range(mx):
            emit(t_mx, "MX", (xoff + c,))
    t_final = rounds * depth
    for q in range(n):
        emit(t_final, "MD", (q,))

    n_qubits = n + mz + mx
    for t in range(rounds * depth):
        present = busy.get(t, set())
        for q in range(n_qubits):
            if q not in present:
                ops.append(Op(t, "IDLE", (q,)))

    circ = Circuit(n, mz, mx, rounds, component, ops, depth)
    circ.validate()
    return circ


# ── Pauli-frame fault analysis ────────────────────────────────────────


@dataclass(frozen=True)
class FaultLocation:
    index: int
    kind: str  # 'gate' | 'reset' | 'idle'
    t: int
    qubits: tuple[int, ...]  # frame bits flipped when this fault fires


class CircuitFaultModel:
    """Single-fault detector signatures for one circuit and component.

    Signatures and logical actions are noise-strength independent; the
    prior of each location is p for gates and resets and p*idle_factor
    for idles, assembled per call in ``to_checkmatrix``.
    """

    def __init__(self, circuit: Circuit, code: CssCode, gate_noise: str = "paired"):
        if gate_noise not in ("paired", "split"):
            raise NoiseError(f"unknown gate noise mode {gate_noise!r}")
        self.circuit = circuit
        self.code = code
        self.gate_noise = gate_noise
        self.component = circuit.component
        h, logical = _component_matrices(code, self.component)
        self._h = h
        self._logical = logical
        self.m = h.n_rows
        self.n_detectors = self.m * (circuit.rounds + 1)
        self._sorted_ops = sorted(circuit.ops, key=lambda o: (o.t, o.kind, o.qubits))
        self.locations = self._enumerate_locations()
        self.signatures, self.actions = self._all_signatures()

    # fault enumeration ------------------------------------------------

    def _enumerate_locations(self) -> list[FaultLocation]:
        locs = []
        idx = 0
        for op in self._sorted_ops:
            if op.kind == "CX":
                if self.gate_noise == "paired":
                    locs.append(FaultLocation(idx, "gate", op.t, op.qubits))
                    idx += 1
                else:
                    for qs in ((op.qubits[0],), (op.qubits[1],), op.qubits):
                        locs.append(FaultLocation(idx, "gate", op.t, qs))
                        idx += 1
            elif op.kind in ("RZ", "RX"):
                locs.append(FaultLocation(idx, "reset", op.t, op.qubits))
                idx += 1
            elif op.kind == "IDLE":
                locs.append(FaultLocation(idx, "idle", op.t, op.qubits))
                idx += 1
        return locs

    def prior_of(self, loc: FaultLocation, p: float, idle_factor: float = IDLE_FACTOR) -> float:
        return p * idle_factor if loc.kind == "idle" else p

    # frame simulation ---------------------------------------------------

    def simulate(self, fault_indices: Iterable[int]):
        """Propagate the given faults; returns (detectors, logical flips).

        The frame tracks Z errors for component 'x' and X errors for
        component 'z'.  CX copies target-frame onto control for Z frames
        and control-frame onto target for X frames.
        """
        circuit = self.circuit
        fire: dict[tuple[int, str, tuple[int, ...]], list[FaultLocation]] = {}
        first_t = None
        for fi in fault_indices:
            loc = self.locations[fi]
            fire.setdefault((loc.t, loc.kind, loc.qubits), []).append(loc)
            if first_t is None or loc.t < first_t:
                first_t = loc.t

        frame = np.zeros(circuit.n_qubits, dtype=np.uint8)
        z_frame = self.component == "x"
        outcome_flips = {}
        ops = self._sorted_ops
        for op in ops:
            # The frame is identically zero before the first fault fires;
            # resets and measurements see zeros, so earlier ops are inert.
            if first_t is not None and op.t < first_t:
                continue
            if op.kind == "CX":
                ctrl, tgt = op.qubits
                if z_frame:
                    frame[ctrl] ^= frame[tgt]
                else:
                    frame[tgt] ^= frame[ctrl]
                for loc in fire.get((op.t, "gate", op.qubits), []):
                    for q in loc.qubits:
                        frame[q] ^= 1
                if self.gate_noise == "split":
                    for sub in ((ctrl,), (tgt,)):
                        for loc in fire.get((op.t, "gate", sub), []):
                            for q in loc.qubits:
                                frame[q] ^= 1
            elif op.kind in ("RZ", "RX"):
                frame[op.qubits[0]] = 0
                for loc in fire.get((op.t, "reset", op.qubits), []):
                    frame[op.qubits[0]] ^= 1
            elif op.kind == "IDLE":
                for loc in fire.get((op.t, "idle", op.qubits), []):
                    frame[op.qubits[0]] ^= 1
            elif op.kind == "MZ":
                if not z_frame:
                    c = op.qubits[0] - circuit.n_data
                    rd = op.t // circuit.depth_per_round
                    outcome_flips[(c, rd)] = int(frame[op.qubits[0]])
            elif op.kind == "MX":
                if z_frame:
                    c = op.qubits[0] - circuit.n_data - circuit.n_z
                    rd = op.t // circuit.depth_per_round
                    outcome_flips[(c, rd)] = int(frame[op.qubits[0]])
            elif op.kind == "MD":
                pass
        data_frame = frame[: circuit.n_data]

        detectors = np.zeros(self.n_detectors, dtype=np.uint8)
        m = self.m
        prev = np.zeros(m, dtype=np.uint8)
        for rd in range(circuit.rounds):
            cur = np.zeros(m, dtype=np.uint8)
            for c in range(m):
                cur[c] = outcome_flips.get((c, rd), 0)
            detectors[rd * m : (rd + 1) * m] = cur ^ prev
            prev = cur
        recon = np.zeros(m, dtype=np.uint8)
        for c in range(m):
            acc = 0
            for q in self._h.row_support(c):
                acc ^= int(data_frame[q])
            recon[c] = acc
        detectors[circuit.rounds * m :] = recon ^ prev

        flips = np.zeros(self._logical.n_rows, dtype=np.uint8)
        for r in range(self._logical.n_rows):
            acc = 0
            for q in self._logical.row_support(r):
                acc ^= int(data_frame[q])
            flips[r] = acc
        return detectors, flips

    def _all_signatures(self):
        sigs = []
        acts = []
        for loc in self.locations:
            det, flips = self.simulate([loc.index])
            sig = 0
            for r in np.nonzero(det)[0]:
                sig |= 1 << int(r)
            act = 0
            for r in np.nonzero(flips)[0]:
                act |= 1 << int(r)
            if sig == 0 and act != 0:
                raise NoiseError(
                    f"undetectable logical fault at {loc}: circuit is not fault-distinguishing"
                )
            sigs.append(sig)
            acts.append(act)
        return sigs, acts

    def to_checkmatrix(
        self, p: float, idle_factor: float = IDLE_FACTOR
    ) -> SpaceTimeCheckMatrix:
        """Merge identical-signature locations and assemble the matrix."""
        merged: dict[tuple[int, int], int] = {}
        priors: list[float] = []
        meta: list[list[FaultLocation]] = []
        keys: list[tuple[int, int]] = []
        for loc, sig, act in zip(self.locations, self.signatures, self.actions):
            if sig == 0 and act == 0:
                continue
            q = self.prior_of(loc, p, idle_factor)
            key = (sig, act)
            if key in merged:
                j = merged[key]
                priors[j] = priors[j] * (1 - q) + q * (1 - priors[j])
                meta[j].append(loc)
            else:
                merged[key] = len(priors)
                keys.append(key)
                priors.append(q)
                meta.append([loc])
        n_cols = len(priors)
        det_rows = [0] * self.n_detectors
        act_rows = [0] * self._logical.n_rows
        for j, (sig, act) in enumerate(keys):
            t = sig
            while t:
                low = t & -t
                det_rows[low.bit_length() - 1] |= 1 << j
                t ^= low
            t = act
            while t:
                low = t & -t
                act_rows[low.bit_length() - 1] |= 1 << j
                t ^= low
        return SpaceTimeCheckMatrix(
            BinaryMatrix(self.n_detectors, n_cols, det_rows),
            np.asarray(priors, dtype=np.float64),
            BinaryMatrix(self._logical.n_rows, n_cols, act_rows),
            meta,
            "circuit",
            self.component,
            self.circuit.rounds,
            source={
                "depth_per_round": self.circuit.depth_per_round,
                "gate_noise": self.gate_noise,
                "idle_factor": idle_factor,
                "n_fault_locations": len(self.locations),
            },
        )


def circuit_to_checkmatrix(
    circuit: Circuit,
    code: CssCode,
    p: float,
    gate_noise: str = "paired",
    idle_factor: float = IDLE_FACTOR,
) -> SpaceTimeCheckMatrix:
    """One-shot wrapper around CircuitFaultModel."""
    return CircuitFaultModel(circuit, code, gate_noise).to_checkmatrix(p, idle_factor)


def build_problem(code: CssCode, component: str, noise: NoiseModel) -> SpaceTimeCheckMatrix:
    """Dispatch on the noise kind."""
    if noise.kind == "code-capacity":
        return build_code_capacity(code, component, noise.p)
    if noise.kind == "phenomenological":
        return build_phenomenological(code, component, noise.p, noise.rounds)
    circuit = build_circuit(code, component, noise.rounds)
    return circuit_to_checkmatrix(
        circuit, code, noise.p, noise.gate_noise, noise.idle_factor
    )
