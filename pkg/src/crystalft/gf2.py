"""Bit-packed linear algebra over GF(2).

Matrices store each row as a run of 64-bit words (numpy ``uint64``), so row
elimination and row XOR run word-parallel.  Bit ``c`` of row ``r`` lives at
``words[r, c >> 6] >> (c & 63) & 1``; within the serialized byte form the
order is little-endian words, i.e. LSB-first inside each byte.
"""

from __future__ import annotations

import base64
from collections.abc import Iterable, Iterator

import numpy as np

__all__ = [
    "BinaryMatrix",
    "mat_rank",
    "mat_mul",
    "mat_transpose",
    "kernel_basis",
    "row_space_basis",
]

_WORD = 64


def _nwords(cols: int) -> int:
    return max(1, (cols + _WORD - 1) // _WORD)


class BinaryMatrix:
    """Dense GF(2) matrix with bit-packed rows.

    Attributes:
        rows: number of rows (may be 0).
        cols: number of columns (may be 0).
        words: ``uint64`` array of shape ``(rows, ceil(cols / 64))``.
    """

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        if words is None:
            words = np.zeros((rows, _nwords(cols)), dtype=np.uint64)
        else:
            words = np.ascontiguousarray(words, dtype=np.uint64)
            if words.shape != (rows, _nwords(cols)):
                raise ValueError(
                    f"word buffer shape {words.shape} does not match "
                    f"({rows}, {_nwords(cols)})"
                )
        self.words = words
        self._mask_tail()

    # -- construction -------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BinaryMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        m = cls(n, n)
        for i in range(n):
            m.set(i, i, 1)
        return m

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> "BinaryMatrix":
        """Build from an iterable of 0/1 row iterables."""
        data = [list(r) for r in rows]
        if cols is None:
            cols = len(data[0]) if data else 0
        m = cls(len(data), cols)
        for i, r in enumerate(data):
            if len(r) != cols:
                raise ValueError("ragged rows")
            for j, v in enumerate(r):
                if v & 1:
                    m.set(i, j, 1)
        return m

    @classmethod
    def from_dense(cls, arr: np.ndarray) -> "BinaryMatrix":
        arr = np.asarray(arr, dtype=np.uint8) & 1
        if arr.ndim != 2:
            raise ValueError("expected a 2-D array")
        rows, cols = arr.shape
        m = cls(rows, cols)
        padded = np.zeros((rows, _nwords(cols) * 8), dtype=np.uint8)
        padded[:, : (cols + 7) // 8] = np.packbits(arr, axis=1, bitorder="little")
        m.words = padded.view("<u8").reshape(rows, _nwords(cols)).astype(np.uint64)
        return m

    @classmethod
    def random(cls, rows: int, cols: int, rng: np.random.Generator, density: float = 0.5) -> "BinaryMatrix":
        return cls.from_dense((rng.random((rows, cols)) < density).astype(np.uint8))

    def copy(self) -> "BinaryMatrix":
        return BinaryMatrix(self.rows, self.cols, self.words.copy())

    # -- element access -----------------------------------------------

    def get(self, r: int, c: int) -> int:
        self._check(r, c)
        return int((self.words[r, c >> 6] >> np.uint64(c & 63)) & np.uint64(1))

    def set(self, r: int, c: int, value: int) -> None:
        self._check(r, c)
        bit = np.uint64(1) << np.uint64(c & 63)
        if value & 1:
            self.words[r, c >> 6] |= bit
        else:
            self.words[r, c >> 6] &= ~bit

    def flip(self, r: int, c: int) -> None:
        self._check(r, c)
        self.words[r, c >> 6] ^= np.uint64(1) << np.uint64(c & 63)

    def row_bits(self, r: int) -> Iterator[int]:
        """Yield the column indices of the set bits in row ``r``, ascending."""
        for w_idx in range(self.words.shape[1]):
            w = int(self.words[r, w_idx])
            base = w_idx << 6
            while w:
                low = w & -w
                yield base + low.bit_length() - 1
                w ^= low

    def to_dense(self) -> np.ndarray:
        """Return the matrix as a ``uint8`` array of 0/1 entries."""
        if self.cols == 0 or self.rows == 0:
            return np.zeros((self.rows, self.cols), dtype=np.uint8)
        raw = self.words.astype("<u8").reshape(self.rows, -1).view(np.uint8)
        bits = np.unpackbits(raw, axis=1, bitorder="little")
        return bits[:, : self.cols].copy()

    # -- serialization ------------------------------------------------

    def to_base64(self) -> str:
        """Pack to base64: rows padded to whole bytes, LSB-first in each byte."""
        if self.rows == 0:
            return ""
        stride = (self.cols + 7) // 8
        raw = self.words.astype("<u8").reshape(self.rows, -1).view(np.uint8)
        return base64.b64encode(raw[:, :stride].tobytes()).decode("ascii")

    @classmethod
    def from_base64(cls, rows: int, cols: int, data: str) -> "BinaryMatrix":
        stride = (cols + 7) // 8
        raw = base64.b64decode(data.encode("ascii"), validate=True)
        if len(raw) != rows * stride:
            raise ValueError(
                f"payload holds {len(raw)} bytes, expected {rows * stride} "
                f"for a {rows}x{cols} matrix"
            )
        buf = np.zeros((max(rows, 1), _nwords(cols) * 8), dtype=np.uint8)
        if rows:
            buf[:rows, :stride] = np.frombuffer(raw, dtype=np.uint8).reshape(rows, stride)
        words = buf.view("<u8").astype(np.uint64)[:rows]
        return cls(rows, cols, words.reshape(rows, _nwords(cols)))

    # -- algebra ------------------------------------------------------

    def transpose(self) -> "BinaryMatrix":
        out = BinaryMatrix(self.cols, self.rows)
        dense = self.to_dense()
        if dense.size:
            return BinaryMatrix.from_dense(dense.T)
        return out

    def rank(self) -> int:
        return _eliminate(self.words.copy(), self.rows, self.cols)[0]

    def is_zero(self) -> bool:
        return not self.words.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self.words, other.words))
        )

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols}, rank<= {min(self.rows, self.cols)})"

    # -- internals ----------------------------------------------------

    def _check(self, r: int, c: int) -> None:
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(f"({r}, {c}) outside {self.rows}x{self.cols}")

    def _mask_tail(self) -> None:
        rem = self.cols & 63
        if rem and self.words.size:
            self.words[:, -1] &= np.uint64((1 << rem) - 1)


def _eliminate(words: np.ndarray, rows: int, cols: int) -> tuple[int, list[int]]:
    """In-place forward elimination; returns (rank, pivot column list)."""
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        w, b = c >> 6, np.uint64(c & 63)
        col = (words[r:, w] >> b) & np.uint64(1)
        hits = np.nonzero(col)[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            words[[r, p]] = words[[p, r]]
        below = r + 1 + np.nonzero((words[r + 1 :, w] >> b) & np.uint64(1))[0]
        if below.size:
            words[below] ^= words[r]
        pivots.append(c)
        r += 1
    return r, pivots


def mat_rank(m: BinaryMatrix) -> int:
    """Rank of ``m`` over GF(2) via word-parallel Gaussian elimination."""
    return m.rank()


def mat_mul(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """GF(2) product ``a @ b``; raises ``ValueError`` on a dimension mismatch."""
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    out = BinaryMatrix(a.rows, b.cols)
    # Accumulate b-rows into output rows, one contraction index at a time;
    # every step is a word-parallel XOR over the selected output rows.
    for k in range(a.cols):
        w, bit = k >> 6, np.uint64(k & 63)
        mask = ((a.words[:, w] >> bit) & np.uint64(1)).astype(bool)
        if mask.any():
            out.words[mask] ^= b.words[k]
    return out


def mat_transpose(m: BinaryMatrix) -> BinaryMatrix:
    return m.transpose()


def row_space_basis(m: BinaryMatrix) -> BinaryMatrix:
    """Matrix whose rows are a basis (in echelon form) of the row space."""
    words = m.words.copy()
    rank, _ = _eliminate(words, m.rows, m.cols)
    return BinaryMatrix(rank, m.cols, words[:rank].copy())

def kernel_basis(m: BinaryMatrix) -> BinaryMatrix:
    """Basis of the right kernel ``{x : m @ x = 0}``, one vector per row.

    Returns a ``dim(ker)`` x ``m.cols`` matrix (0 rows when the kernel is
    trivial).
    """
    words = m.words.copy()
    rank, pivots = _eliminate(words, m.rows, m.cols)
    # Back-substitute to reduced echelon form.
    for i in range(rank - 1, -1, -1):
        c = pivots[i]
        w, b = c >> 6, np.uint64(c & 63)
        above = np.nonzero((words[:i, w] >> b) & np.uint64(1))[0]
        if above.size:
            words[above] ^= words[i]
    free = [c for c in range(m.cols) if c not in set(pivots)]
    out = BinaryMatrix(len(free), m.cols)
    for row_idx, fc in enumerate(free):
        out.set(row_idx, fc, 1)
        fw, fb = fc >> 6, np.uint64(fc & 63)
        for i, pc in enumerate(pivots):
            if (words[i, fw] >> fb) & np.uint64(1):
                out.set(row_idx, pc, 1)
    return out
