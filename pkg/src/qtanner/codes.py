"""Classical linear codes and the tensor-code pairs used for stabilizers.

A code is held as a generator/parity matrix pair with G H^T = 0.  Codes
serialize to JSON as ``{"n", "k", "G", "H", "d"}`` with matrices as dense
0/1 row lists.

The tensor bases are Kronecker products of generator rows in row-major
order, so a stabilizer weight is the product of two classical row
weights.  ``reduce_basis_weights`` offers an optional greedy pass that
XORs basis rows to shrink the maximum row weight; it changes the basis,
never the span, and is off by default everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import gf2
from .gf2 import BinaryMatrix

__all__ = [
    "ClassicalCode",
    "CodePair",
    "CodeError",
    "random_systematic",
    "dual",
    "min_distance_exhaustive",
    "build_pair",
    "reduce_basis_weights",
]

MAX_EXHAUSTIVE_DIM = 20


class CodeError(ValueError):
    pass


@dataclass(frozen=True)
class ClassicalCode:
    """Linear [n, k] code given by generator and parity check matrices."""

    generator: BinaryMatrix
    parity: BinaryMatrix
    d: Optional[int] = None

    def __post_init__(self):
        g, h = self.generator, self.parity
        if g.n_cols != h.n_cols:
            raise CodeError("generator and parity block lengths differ")
        if g.n_rows + h.n_rows != g.n_cols:
            raise CodeError("k + (n - k) != n for the given matrices")
        if gf2.rank(g) != g.n_rows:
            raise CodeError("generator rows are dependent")
        if h.n_rows and gf2.rank(h) != h.n_rows:
            raise CodeError("parity rows are dependent")
        prod = g.matmul(h.transpose())
        if not prod.is_zero():
            raise CodeError("G H^T != 0")

    @property
    def n(self) -> int:
        return self.generator.n_cols

    @property
    def k(self) -> int:
        return self.generator.n_rows

    def codewords(self):
        """Iterate all 2^k codewords as int bitsets (k <= 20 guard)."""
        if self.k > MAX_EXHAUSTIVE_DIM:
            raise CodeError(f"k={self.k} too large to enumerate")
        rows = self.generator.rows
        for mask in range(1 << self.k):
            w = 0
            m = mask
            while m:
                low = m & -m
                w ^= rows[low.bit_length() - 1]
                m ^= low
            yield w

    @classmethod
    def from_parity(cls, parity: BinaryMatrix, d: Optional[int] = None) -> "ClassicalCode":
        return cls(gf2.kernel_basis(parity), parity, d)

    @classmethod
    def from_generator(cls, generator: BinaryMatrix, d: Optional[int] = None) -> "ClassicalCode":
        return cls(generator, gf2.kernel_basis(generator), d)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "k": self.k,
                "G": self.generator.to_dense().tolist(),
                "H": self.parity.to_dense().tolist(),
                "d": self.d,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ClassicalCode":
        obj = json.loads(text)
        g = BinaryMatrix.from_dense(np.asarray(obj["G"], dtype=np.uint8))
        h = BinaryMatrix.from_dense(np.asarray(obj["H"], dtype=np.uint8))
        return cls(g, h, obj.get("d"))


def random_systematic(k: int, n: int, rng: np.random.Generator) -> ClassicalCode:
    """Random systematic [n, k] code: G = [I | P], H = [P^T | I]."""
    if not 0 < k < n:
        raise CodeError(f"need 0 < k < n, got k={k}, n={n}")
    p = rng.integers(0, 2, size=(k, n - k), dtype=np.uint8)
    g = np.hstack([np.eye(k, dtype=np.uint8), p])
    h = np.hstack([p.T, np.eye(n - k, dtype=np.uint8)])
    return ClassicalCode(BinaryMatrix.from_dense(g), BinaryMatrix.from_dense(h))


def dual(code: ClassicalCode) -> ClassicalCode:
    """Dual code: generator and parity matrices swap roles."""
    return ClassicalCode(code.parity, code.generator)


def min_distance_exhaustive(code: ClassicalCode) -> Optional[int]:
    """Minimum Hamming weight over nonzero codewords by full enumeration.

    Returns None for the zero-dimensional code (distance undefined; never
    reported as 0).  Raises for k > 20 — use the randomized estimator in
    the distance module for larger codes.
    """
    if code.k == 0:
        return None
    if code.k > MAX_EXHAUSTIVE_DIM:
        raise CodeError(
            f"k={code.k} exceeds the 2^{MAX_EXHAUSTIVE_DIM} enumeration guard; "
            "use the randomized distance estimator instead"
        )
    best = code.n + 1
    for w in code.codewords():
        if w:
            best = min(best, w.bit_count())
    return best


@dataclass(frozen=True)
class CodePair:
    """Code pair (C_A, C_B) with tensor codes C0 = C_A (x) C_B and
    C1 = dual(C_A) (x) dual(C_B).

    Tensor-basis columns are indexed by generator pairs (a, b) with index
    ia * Delta_B + ib, matching the local-view raster order of the
    complex module.
    """

    code_a: ClassicalCode
    code_b: ClassicalCode
    c0_basis: BinaryMatrix
    c1_basis: BinaryMatrix

    @property
    def delta(self) -> int:
        return self.code_a.n

    @property
    def rho(self) -> float:
        return self.code_a.k / self.code_a.n

    def to_json(self) -> str:
        return json.dumps(
            {"code_a": json.loads(self.code_a.to_json()),
             "code_b": json.loads(self.code_b.to_json())}
        )

    @classmethod
    def from_json(cls, text: str) -> "CodePair":
        obj = json.loads(text)
        ca = ClassicalCode.from_json(json.dumps(obj["code_a"]))
        cb = ClassicalCode.from_json(json.dumps(obj["code_b"]))
        return build_pair(ca, cb)


def build_pair(code_a: ClassicalCode, code_b: ClassicalCode) -> CodePair:
    """Materialize the tensor bases for a code pair.

    Requires equal block lengths and k_A + k_B = Delta so that
    dim(C0) = dim(C1) = rho (1 - rho) Delta^2.
    """
    if code_a.n != code_b.n:
        raise CodeError(
            f"dimension mismatch: block lengths {code_a.n} != {code_b.n}"
        )
    delta = code_a.n
    if code_a.k + code_b.k != delta:
        raise CodeError(
            f"dimension mismatch: k_A + k_B = {code_a.k}+{code_b.k} != Delta = {delta}"
        )
    c0 = gf2.kron(code_a.generator, code_b.generator)
    c1 = gf2.kron(code_a.parity, code_b.parity)
    if c0.n_rows != c1.n_rows:
        raise CodeError("tensor code dimensions disagree")
    return CodePair(code_a, code_b, c0, c1)


def reduce_basis_weights(basis: BinaryMatrix, max_passes: int = 8) -> BinaryMatrix:
    """Greedy row-combination pass shrinking the maximum row weight.

    Repeatedly replaces a row with its XOR against another row whenever
    that strictly lowers the larger of the two weights involved.  The row
    span is preserved.  Off by default in the stabilizer construction.
    """
    rows = list(basis.rows)
    for _ in range(max_passes):
        improved = False
        for i in range(len(rows)):
            for j in range(len(rows)):
                if i == j:
                    continue
                cand = rows[i] ^ rows[j]
                if cand and cand.bit_count() < rows[i].bit_count():
                    rows[i] = cand
                    improved = True
        if not improved:
            break
    out = BinaryMatrix(basis.n_rows, basis.n_cols, rows)
    if gf2.rank(out) != gf2.rank(basis):
        raise CodeError("weight reduction corrupted the basis")
    return out
