"""Randomized minimum-distance upper bounds for CSS codes.

The estimator draws random column permutations, row-reduces a matrix
whose row space is the full logical-candidate space (stabilizers plus
logical representatives), and keeps the lightest reduced row (or row
pair) that acts nontrivially on the logicals.  This is the standard
random-information-set search; the returned value is an upper bound
that saturates quickly at these code sizes.

Every witness is re-verified against the parity checks and the logical
pairing using the plain gf2 routines, independently of the search path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from . import gf2
from .gf2 import BinaryMatrix
from .qcode import CssCode
from ._kernels import distance_trials

__all__ = ["DistanceEstimate", "estimate_distance", "exhaustive_logical_search"]


class DistanceError(ValueError):
    pass


@dataclass(frozen=True)
class DistanceEstimate:
    d_x_upper: int
    d_z_upper: int
    trials: int
    witness_x: int  # int bitset; X-type logical of weight d_x_upper
    witness_z: int

    @property
    def d_upper(self) -> int:
        return min(self.d_x_upper, self.d_z_upper)

    def to_json(self) -> str:
        return json.dumps(
            {
                "d_upper": self.d_upper,
                "d_x_upper": self.d_x_upper,
                "d_z_upper": self.d_z_upper,
                "trials": self.trials,
                "witness_x": _bits_to_list(self.witness_x),
                "witness_z": _bits_to_list(self.witness_z),
            }
        )


def _bits_to_list(v: int) -> list[int]:
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


def _packed_to_int(vec: np.ndarray) -> int:
    out = 0
    for j in range(vec.shape[0] - 1, -1, -1):
        out = (out << 64) | int(vec[j])
    return out


def default_trials(n: int) -> int:
    return 100_000 if n <= 100 else 1_000_000


def _component_upper(
    stab: BinaryMatrix,
    logicals: BinaryMatrix,
    partners: BinaryMatrix,
    trials: int,
    seed: int,
    use_pairs: bool,
) -> tuple[int, int]:
    """Best weight and witness for one logical type.

    ``stab`` + ``logicals`` span the commuting space; ``partners`` is the
    opposite-type logical basis used for the nontriviality pairing.
    """
    n = stab.n_cols
    stack = stab.vstack(logicals)
    best = min((logicals.row_weight(r) for r in range(logicals.n_rows)))
    best_vec = min(
        (logicals.rows[r] for r in range(logicals.n_rows)),
        key=lambda v: v.bit_count(),
    )
    w, vec, found = distance_trials(
        stack.to_packed(),
        n,
        partners.to_packed(),
        trials,
        np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
        best + 1,
        use_pairs,
    )
    if found >= 0 and w <= best:
        best, best_vec = int(w), _packed_to_int(vec)
    return best, best_vec


def _verify_witness(code: CssCode, vec: int, kind: str):
    if kind == "x":
        stab, partners = code.hz, code.lz
    else:
        stab, partners = code.hx, code.lx
    if stab.mul_vec(vec) != 0:
        raise DistanceError("witness violates the parity checks")
    if partners.mul_vec(vec) == 0:
        raise DistanceError("witness acts trivially on the logicals")


def estimate_distance(
    code: CssCode,
    trials: Optional[int] = None,
    seed: int = 0,
    use_pairs: bool = True,
) -> DistanceEstimate:
    """Upper-bound d_x and d_z by random information set search.

    Trials are seeded per-index from ``seed``, so estimates are
    reproducible and merging partial runs by min is associative.
    """
    if code.k == 0:
        raise DistanceError("code has no logical operators")
    if trials is None:
        trials = default_trials(code.n)
    if trials < 1:
        raise DistanceError("trials must be >= 1")
    dx, wx = _component_upper(code.hx, code.lx, code.lz, trials, seed, use_pairs)
    dz, wz = _component_upper(code.hz, code.lz, code.lx, trials, seed + 1, use_pairs)
    _verify_witness(code, wx, "x")
    _verify_witness(code, wz, "z")
    return DistanceEstimate(dx, dz, trials, wx, wz)


def exhaustive_logical_search(code: CssCode, max_weight: int) -> Optional[int]:
    """Smallest logical weight <= max_weight by direct enumeration.

    Checks both X-type (ker H_Z, paired against lz) and Z-type vectors.
    Returns None when no logical of weight <= max_weight exists, which
    proves d > max_weight.
    """
    n = code.n
    for weight in range(1, max_weight + 1):
        for support in combinations(range(n), weight):
            v = 0
            for c in support:
                v |= 1 << c
            if code.hz.mul_vec(v) == 0 and code.lz.mul_vec(v) != 0:
                return weight
            if code.hx.mul_vec(v) == 0 and code.lx.mul_vec(v) != 0:
                return weight
    return None
