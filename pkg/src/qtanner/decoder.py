"""Min-sum belief propagation with OSD post-processing.

The decoder runs scaled min-sum message passing (parallel flooding
schedule) on the Tanner graph of an arbitrary binary check matrix with
per-column priors, then falls back to ordered-statistics decoding when
message passing fails to reach a syndrome-consistent hard decision.

OSD sorts columns most-to-least likely flipped (ties broken by ascending
column index), inverts the first rank(H) independent columns, and — in
the combination-sweep strategy — additionally tries every weight-1 and
weight-2 flip pattern on the ``osd_order`` most likely rejected columns,
keeping the solution of lowest total prior weight.  Candidates are
scored by the sum of log((1-p)/p) over their support, so with uniform
priors this is minimum Hamming weight.  The returned correction always
satisfies H @ e = syndrome exactly; an unsatisfiable syndrome raises.

Everything is deterministic given (H, priors, syndrome, config).  A
decoder instance owns its message buffers: share one instance per
thread, or clone cheaply from the same matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .gf2 import BinaryMatrix
from ._kernels import bp_min_sum, osd_solve, rank_packed

__all__ = [
    "DecoderConfig",
    "BpResult",
    "SyndromeDecoder",
    "DecoderError",
    "bp_decode",
    "osd_postprocess",
    "decode_to_logical",
]


class DecoderError(ValueError):
    pass


@dataclass(frozen=True)
class DecoderConfig:
    """Knobs for BP and OSD.

    ``max_iters=None`` means one iteration per matrix column.  The
    combination sweep uses weight <= 2 patterns over ``osd_order``
    residual columns; ``osd_strategy="order-0"`` (or order 0) disables
    the sweep.
    """

    alpha: float = 0.625
    max_iters: Optional[int] = None
    osd_order: int = 9
    osd_strategy: str = "combination-sweep"

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise DecoderError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.osd_strategy not in ("combination-sweep", "order-0"):
            raise DecoderError(f"unknown OSD strategy {self.osd_strategy!r}")
        if self.osd_order < 0:
            raise DecoderError("osd_order must be nonnegative")


@dataclass
class BpResult:
    hard_decision: np.ndarray
    soft_values: np.ndarray  # total LLR per column; <= 0 means likely flipped
    converged: bool
    iterations: int


def _as_dense(h) -> np.ndarray:
    if isinstance(h, BinaryMatrix):
        return h.to_dense()
    arr = np.asarray(h, dtype=np.uint8) % 2
    if arr.ndim != 2:
        raise DecoderError("check matrix must be two-dimensional")
    return arr


class SyndromeDecoder:
    """Reusable BP+OSD decoder bound to one check matrix and prior vector."""

    def __init__(self, h, priors, config: Optional[DecoderConfig] = None):
        dense = _as_dense(h)
        self.m, self.n = dense.shape
        priors = np.asarray(priors, dtype=np.float64)
        if priors.shape == ():
            priors = np.full(self.n, float(priors))
        if priors.shape != (self.n,):
            raise DecoderError("priors must give one probability per column")
        if np.any(priors <= 0.0) or np.any(priors > 0.5):
            raise DecoderError("priors must lie in (0, 0.5]")
        self.priors = priors
        self.config = config or DecoderConfig()
        self.prior_llr = np.log((1.0 - priors) / priors)

        rows, cols = np.nonzero(dense)
        edge_order = np.lexsort((cols, rows))
        self.edge_var = cols[edge_order].astype(np.int64)
        self.check_ptr = np.zeros(self.m + 1, dtype=np.int64)
        np.add.at(self.check_ptr, rows + 1, 1)
        self.check_ptr = np.cumsum(self.check_ptr).astype(np.int64)
        var_order = np.lexsort((rows[edge_order], cols[edge_order]))
        self.var_edge = var_order.astype(np.int64)
        self.var_ptr = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(self.var_ptr, cols + 1, 1)
        self.var_ptr = np.cumsum(self.var_ptr).astype(np.int64)

        packed_cols = np.zeros((self.n, max(1, (self.m + 63) // 64)), dtype=np.uint64)
        for r, c in zip(rows, cols):
            packed_cols[c, r >> 6] |= np.uint64(1) << np.uint64(r & 63)
        self.packed_cols = packed_cols
        self.rank = int(rank_packed(BinaryMatrix.from_dense(dense).to_packed(), self.n))
        self._dense = dense

        n_edges = self.edge_var.shape[0]
        self._v2c = np.zeros(n_edges, dtype=np.float64)
        self._c2v = np.zeros(n_edges, dtype=np.float64)
        self._soft = np.zeros(self.n, dtype=np.float64)
        self._hard = np.zeros(self.n, dtype=np.uint8)
        self._e = np.zeros(self.n, dtype=np.uint8)

    @property
    def max_iters(self) -> int:
        return self.config.max_iters if self.config.max_iters is not None else self.n

    def bp(self, syndrome) -> BpResult:
        syndrome = np.asarray(syndrome, dtype=np.uint8)
        if syndrome.shape != (self.m,):
            raise DecoderError("syndrome length must equal the check count")
        converged, iters = bp_min_sum(
            self.check_ptr,
            self.edge_var,
            self.var_ptr,
            self.var_edge,
            self.prior_llr,
            syndrome,
            float(self.config.alpha),
            int(self.max_iters),
            self._v2c,
            self._c2v,
            self._soft,
            self._hard,
        )
        return BpResult(self._hard.copy(), self._soft.copy(), bool(converged), int(iters))

    def osd(self, soft_values, syndrome) -> np.ndarray:
        syndrome = np.asarray(syndrome, dtype=np.uint8)
        soft = np.asarray(soft_values, dtype=np.float64)
        # Most likely flipped first; stable sort keeps ascending column
        # index on ties.
        order = np.argsort(soft, kind="stable").astype(np.int64)
        lam = self.config.osd_order if self.config.osd_strategy == "combination-sweep" else 0
        lam = min(lam, self.n - self.rank)
        ok = osd_solve(
            self.packed_cols,
            self.m,
            order,
            syndrome,
            self.prior_llr,
            int(lam),
            True,
            self.rank,
            self._e,
        )
        if not ok:
            raise DecoderError("syndrome is not in the column space of H")
        e = self._e.copy()
        if np.any((self._dense @ e) % 2 != syndrome):
            raise DecoderError("OSD postcondition H e = s violated")
        return e

    def decode(self, syndrome) -> tuple[np.ndarray, BpResult]:
        """BP first; OSD only when BP fails to converge."""
        result = self.bp(syndrome)
        if result.converged:
            return result.hard_decision, result
        return self.osd(result.soft_values, syndrome), result


def bp_decode(h, priors, syndrome, config: Optional[DecoderConfig] = None) -> BpResult:
    """One-shot min-sum BP; see SyndromeDecoder.bp."""
    return SyndromeDecoder(h, priors, config).bp(syndrome)


def osd_postprocess(
    h, soft_values, syndrome, config: Optional[DecoderConfig] = None, priors=None
) -> np.ndarray:
    """One-shot OSD from BP soft values.

    ``priors`` sets the candidate weighting; uniform (pure Hamming
    weight) when omitted.
    """
    n = _as_dense(h).shape[1]
    if priors is None:
        priors = np.full(n, 0.1)
    return SyndromeDecoder(h, priors, config).osd(soft_values, syndrome)


def decode_to_logical(
    h, logical_action, priors, syndrome, config: Optional[DecoderConfig] = None
) -> np.ndarray:
    """Decode and report the predicted logical flips (action @ e mod 2)."""
    action = _as_dense(logical_action)
    dec = SyndromeDecoder(h, priors, config)
    e, _ = dec.decode(syndrome)
    return (action @ e) % 2
