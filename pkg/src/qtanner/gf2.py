"""Exact linear algebra over GF(2) on dense bit matrices.

Rows are stored as Python integers used as bitsets (bit ``c`` of row ``r``
is the entry at column ``c``), so row updates during Gaussian elimination
are single word-level XOR operations.  Matrices are immutable from the
caller's perspective: every operation works on a private copy.

Two serialization formats are supported and documented bit-exactly:

* ``alist`` — the sparse text format commonly used for LDPC parity check
  matrices.  Layout (whitespace separated)::

      n_cols n_rows
      max_col_weight max_row_weight
      <n_cols column weights>
      <n_rows row weights>
      <for each column: 1-based row indices of its nonzero entries>
      <for each row:    1-based column indices of its nonzero entries>

  Index lists are written without zero padding; the parser also accepts
  padded files (trailing zeros in an index list are ignored).

* JSON dense — ``{"rows": r, "cols": c, "data": [[0/1, ...], ...]}``.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BinaryMatrix",
    "rank",
    "rref",
    "kernel_basis",
    "solve_submatrix",
    "kron",
    "is_in_rowspace",
    "RowBasis",
]


class GF2Error(ValueError):
    """Raised for singular or inconsistent GF(2) systems."""


class BinaryMatrix:
    """Dense bit matrix over GF(2) backed by int bitsets, one per row."""

    __slots__ = ("n_rows", "n_cols", "rows")

    def __init__(self, n_rows: int, n_cols: int, rows: Sequence[int] | None = None):
        if n_rows < 0 or n_cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.n_rows = n_rows
        self.n_cols = n_cols
        if rows is None:
            self.rows = [0] * n_rows
        else:
            if len(rows) != n_rows:
                raise ValueError(f"expected {n_rows} rows, got {len(rows)}")
            mask = (1 << n_cols) - 1
            self.rows = [int(r) & mask for r in rows]

    # ── constructors ──────────────────────────────────────────────────

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "BinaryMatrix":
        return cls(n_rows, n_cols)

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_dense(cls, array) -> "BinaryMatrix":
        a = np.asarray(array, dtype=np.uint8) % 2
        if a.ndim == 1:
            a = a[None, :]
        if a.ndim != 2:
            raise ValueError("expected a 1-D or 2-D array")
        rows = []
        for r in range(a.shape[0]):
            bits = 0
            for c in np.nonzero(a[r])[0]:
                bits |= 1 << int(c)
            rows.append(bits)
        return cls(a.shape[0], a.shape[1], rows)

    @classmethod
    def from_row_supports(
        cls, n_rows: int, n_cols: int, supports: Iterable[Iterable[int]]
    ) -> "BinaryMatrix":
        """Build from per-row lists of nonzero column indices."""
        rows = []
        for supp in supports:
            bits = 0
            for c in supp:
                bits ^= 1 << c
            rows.append(bits)
        return cls(n_rows, n_cols, rows)

    # ── views / conversions ───────────────────────────────────────────

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for r, bits in enumerate(self.rows):
            while bits:
                low = bits & -bits
                out[r, low.bit_length() - 1] = 1
                bits ^= low
        return out

    def to_packed(self) -> np.ndarray:
        """Rows packed into uint64 words, little-endian within each word."""
        n_words = max(1, (self.n_cols + 63) // 64)
        out = np.zeros((self.n_rows, n_words), dtype=np.uint64)
        mask = (1 << 64) - 1
        for r, bits in enumerate(self.rows):
            w = 0
            while bits:
                out[r, w] = bits & mask
                bits >>= 64
                w += 1
        return out

    def get(self, r: int, c: int) -> int:
        return (self.rows[r] >> c) & 1

    def row_support(self, r: int) -> list[int]:
        out = []
        bits = self.rows[r]
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    def row_weight(self, r: int) -> int:
        return self.rows[r].bit_count()

    def row_weights(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def column_weights(self) -> list[int]:
        counts = [0] * self.n_cols
        for bits in self.rows:
            while bits:
                low = bits & -bits
                counts[low.bit_length() - 1] += 1
                bits ^= low
        return counts

    # ── algebra ───────────────────────────────────────────────────────

    def transpose(self) -> "BinaryMatrix":
        cols = [0] * self.n_cols
        for r, bits in enumerate(self.rows):
            while bits:
                low = bits & -bits
                cols[low.bit_length() - 1] |= 1 << r
                bits ^= low
        return BinaryMatrix(self.n_cols, self.n_rows, cols)

    def matmul(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if self.n_cols != other.n_rows:
            raise ValueError("inner dimensions do not match")
        out = []
        for bits in self.rows:
            acc = 0
            while bits:
                low = bits & -bits
                acc ^= other.rows[low.bit_length() - 1]
                bits ^= low
            out.append(acc)
        return BinaryMatrix(self.n_rows, other.n_cols, out)

    def mul_vec(self, v: int) -> int:
        """Matrix times column vector; both vectors are int bitsets."""
        out = 0
        for r, bits in enumerate(self.rows):
            if (bits & v).bit_count() & 1:
                out |= 1 << r
        return out

    def add(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if (self.n_rows, self.n_cols) != (other.n_rows, other.n_cols):
            raise ValueError("shape mismatch")
        return BinaryMatrix(
            self.n_rows, self.n_cols, [a ^ b for a, b in zip(self.rows, other.rows)]
        )

    def vstack(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if self.n_cols != other.n_cols:
            raise ValueError("column counts differ")
        return BinaryMatrix(
            self.n_rows + other.n_rows, self.n_cols, self.rows + other.rows
        )

    def submatrix_rows(self, indices: Sequence[int]) -> "BinaryMatrix":
        return BinaryMatrix(len(indices), self.n_cols, [self.rows[i] for i in indices])

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.rows)

    def copy(self) -> "BinaryMatrix":
        return BinaryMatrix(self.n_rows, self.n_cols, list(self.rows))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinaryMatrix)
            and self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.n_rows, self.n_cols, tuple(self.rows)))

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.n_rows}x{self.n_cols})"

    # ── serialization ─────────────────────────────────────────────────

    def to_alist(self) -> str:
        col_supports = [[] for _ in range(self.n_cols)]
        row_supports = []
        for r in range(self.n_rows):
            supp = self.row_support(r)
            row_supports.append(supp)
            for c in supp:
                col_supports[c].append(r)
        max_col = max((len(s) for s in col_supports), default=0)
        max_row = max((len(s) for s in row_supports), default=0)
        lines = [
            f"{self.n_cols} {self.n_rows}",
            f"{max_col} {max_row}",
            " ".join(str(len(s)) for s in col_supports),
            " ".join(str(len(s)) for s in row_supports),
        ]
        for s in col_supports:
            lines.append(" ".join(str(i + 1) for i in s))
        for s in row_supports:
            lines.append(" ".join(str(i + 1) for i in s))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_alist(cls, text: str) -> "BinaryMatrix":
        tokens = text.split()
        pos = 0

        def take(k):
            nonlocal pos
            vals = [int(t) for t in tokens[pos : pos + k]]
            if len(vals) != k:
                raise ValueError("truncated alist data")
            pos += k
            return vals

        n_cols, n_rows = take(2)
        take(2)  # max weights, informational only
        col_wts = take(n_cols)
        row_wts = take(n_rows)
        rows = [0] * n_rows
        for c in range(n_cols):
            for r in take(col_wts[c]):
                if r == 0:  # padded variant
                    continue
                rows[r - 1] |= 1 << c
        check = [0] * n_rows
        for r in range(n_rows):
            for c in take(row_wts[r]):
                if c == 0:
                    continue
                check[r] |= 1 << (c - 1)
        if check != rows:
            raise ValueError("alist row and column sections disagree")
        return cls(n_rows, n_cols, rows)

    def to_json(self) -> str:
        return json.dumps(
            {
                "rows": self.n_rows,
                "cols": self.n_cols,
                "data": self.to_dense().tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "BinaryMatrix":
        obj = json.loads(text)
        m = cls.from_dense(np.asarray(obj["data"], dtype=np.uint8)) if obj["data"] else cls(
            obj["rows"], obj["cols"]
        )
        if (m.n_rows, m.n_cols) != (obj["rows"], obj["cols"]):
            raise ValueError("JSON header disagrees with data shape")
        return m


# ── free-standing operations ──────────────────────────────────────────


def _eliminate(rows: list[int], n_cols: int, reduce_full: bool) -> tuple[list[int], list[int]]:
    """Gaussian elimination in place on a list of int rows.

    Pivot selection is deterministic: columns are scanned in increasing
    order and the pivot is the lowest-index unused row with a 1 in that
    column.  Returns (rows, pivot_cols).
    """
    pivot_cols = []
    pivot_row = 0
    n_rows = len(rows)
    for col in range(n_cols):
        sel = None
        bit = 1 << col
        for r in range(pivot_row, n_rows):
            if rows[r] & bit:
                sel = r
                break
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        piv = rows[pivot_row]
        rng = range(n_rows) if reduce_full else range(pivot_row + 1, n_rows)
        for r in rng:
            if r != pivot_row and rows[r] & bit:
                rows[r] = rows[r] ^ piv
        pivot_cols.append(col)
        pivot_row += 1
        if pivot_row == n_rows:
            break
    return rows, pivot_cols


def rank(m: BinaryMatrix) -> int:
    """Rank over GF(2) via Gaussian elimination."""
    _, pivots = _eliminate(list(m.rows), m.n_cols, reduce_full=False)
    return len(pivots)


def rref(m: BinaryMatrix) -> tuple[BinaryMatrix, list[int]]:
    """Reduced row echelon form and pivot columns (increasing order)."""
    rows, pivots = _eliminate(list(m.rows), m.n_cols, reduce_full=True)
    return BinaryMatrix(m.n_rows, m.n_cols, rows), pivots


def kernel_basis(m: BinaryMatrix) -> BinaryMatrix:
    """Basis of the right null space; rows satisfy m @ v = 0.

    The returned matrix has cols(m) - rank(m) rows (possibly zero).
    """
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.n_cols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        v = 1 << fc
        for i, pc in enumerate(pivots):
            if (reduced.rows[i] >> fc) & 1:
                v |= 1 << pc
        basis.append(v)
    return BinaryMatrix(len(basis), m.n_cols, basis)


def solve_submatrix(m: BinaryMatrix, col_subset: Sequence[int], s: int) -> int:
    """Solve m restricted to col_subset for syndrome s (int bitset).

    Returns the unique error vector supported on ``col_subset`` with
    ``m @ e = s``.  Raises GF2Error if the subset columns are linearly
    dependent or the system is inconsistent.
    """
    cols = list(col_subset)
    r = len(cols)
    # Augmented system: rows over r subset columns plus the syndrome bit.
    aug = []
    for i in range(m.n_rows):
        bits = 0
        for j, c in enumerate(cols):
            bits |= ((m.rows[i] >> c) & 1) << j
        bits |= ((s >> i) & 1) << r
        aug.append(bits)
    aug, pivots = _eliminate(aug, r, reduce_full=True)
    if len(pivots) < r:
        raise GF2Error("column subset is singular")
    for i in range(len(pivots), m.n_rows):
        if aug[i]:
            raise GF2Error("inconsistent syndrome for the given column subset")
    e = 0
    for i, pc in enumerate(pivots):
        if (aug[i] >> r) & 1:
            e |= 1 << cols[pc]
    return e


def kron(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """Kronecker product; column (i, j) of (a, b) maps to i*b.n_cols + j."""
    out = []
    for ra in a.rows:
        for rb in b.rows:
            bits = 0
            t = ra
            while t:
                low = t & -t
                bits |= rb << ((low.bit_length() - 1) * b.n_cols)
                t ^= low
            out.append(bits)
    return BinaryMatrix(a.n_rows * b.n_rows, a.n_cols * b.n_cols, out)


def is_in_rowspace(m: BinaryMatrix, v: int) -> bool:
    """Whether vector v (int bitset over cols(m)) lies in the row space."""
    base = list(m.rows)
    _, pivots = _eliminate(list(base), m.n_cols, reduce_full=False)
    _, pivots_aug = _eliminate(base + [v], m.n_cols, reduce_full=False)
    return len(pivots_aug) == len(pivots)


class RowBasis:
    """Incremental row-space basis for repeated membership tests.

    Keeps rows in echelon form keyed by their leading (lowest set) bit so
    each insertion or membership query costs one reduction pass.
    """

    def __init__(self, n_cols: int):
        self.n_cols = n_cols
        self._lead: dict[int, int] = {}

    def reduce(self, v: int) -> int:
        while v:
            lead = (v & -v).bit_length() - 1
            row = self._lead.get(lead)
            if row is None:
                return v
            v ^= row
        return 0

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def add(self, v: int) -> bool:
        """Insert v; returns True if it enlarged the span."""
        v = self.reduce(v)
        if v == 0:
            return False
        self._lead[(v & -v).bit_length() - 1] = v
        return True

    @property
    def rank(self) -> int:
        return len(self._lead)
