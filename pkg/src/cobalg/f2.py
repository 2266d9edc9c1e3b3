"""Dense linear algebra over the two-element field.

Rows are stored as Python ints used as bitsets: bit ``c`` of row ``r`` is the
entry ``(r, c)``.  Vectors are plain ints with the same convention.  Python
ints are arbitrary precision, so a row of any width is one object and XOR of
rows is a single machine-level operation per 64-bit limb.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


def bits(v: int) -> Iterable[int]:
    """Indices of set bits of ``v`` in increasing order."""
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def parity(v: int) -> int:
    return v.bit_count() & 1


def vec_from_str(s: str) -> int:
    """'0110' -> bitset with bit i set when s[i] == '1'."""
    v = 0
    for i, ch in enumerate(s):
        if ch == "1":
            v |= 1 << i
    return v


def vec_to_str(v: int, n: int) -> str:
    return "".join("1" if (v >> i) & 1 else "0" for i in range(n))


def vec_from_array(a) -> int:
    v = 0
    for i in np.flatnonzero(np.asarray(a) & 1):
        v |= 1 << int(i)
    return v


def vec_to_array(v: int, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.uint8)
    for i in bits(v):
        out[i] = 1
    return out


@dataclass(frozen=True)
class BitMatrix:
    """An ``rows x cols`` matrix over F2."""

    rows: int
    cols: int
    data: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.data) != self.rows:
            raise ValueError("row count mismatch")
        mask = ~((1 << self.cols) - 1)
        for r in self.data:
            if r & mask or r < 0:
                raise ValueError("row wider than column count")

    # construction

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence, cols: int | None = None) -> "BitMatrix":
        """Rows given as '0101' strings, 0/1 sequences or int bitsets."""
        data = []
        width = cols
        for r in rows:
            if isinstance(r, str):
                width = len(r) if width is None else width
                data.append(vec_from_str(r))
            elif isinstance(r, int):
                data.append(r)
            else:
                r = list(r)
                width = len(r) if width is None else width
                data.append(vec_from_array(r))
        if width is None:
            width = 0
        return cls(len(data), width, tuple(data))

    @classmethod
    def from_columns(cls, columns: Sequence[int], rows: int) -> "BitMatrix":
        """Build from column bitsets (column j = image of basis vector j)."""
        data = [0] * rows
        for j, c in enumerate(columns):
            for i in bits(c):
                if i >= rows:
                    raise ValueError("column taller than row count")
                data[i] |= 1 << j
        return cls(rows, len(columns), tuple(data))

    @classmethod
    def from_array(cls, a) -> "BitMatrix":
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(a.shape[0], a.shape[1], tuple(vec_from_array(row) for row in a))

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for r, row in enumerate(self.data):
            for c in bits(row):
                out[r, c] = 1
        return out

    # access

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(rc)
        return (self.data[r] >> c) & 1

    @property
    def columns(self) -> tuple[int, ...]:
        return self.T.data

    @property
    def T(self) -> "BitMatrix":
        cols = [0] * self.cols
        for r, row in enumerate(self.data):
            for c in bits(row):
                cols[c] |= 1 << r
        return BitMatrix(self.cols, self.rows, tuple(cols))

    def is_zero(self) -> bool:
        return not any(self.data)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # arithmetic

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return BitMatrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    __sub__ = __add__

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        od = other.data
        out = []
        for row in self.data:
            acc = 0
            for c in bits(row):
                acc ^= od[c]
            out.append(acc)
        return BitMatrix(self.rows, other.cols, tuple(out))

    def apply(self, v: int) -> int:
        """Matrix times column vector (both as bitsets)."""
        out = 0
        for r, row in enumerate(self.data):
            if parity(row & v):
                out |= 1 << r
        return out

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "BitMatrix":
        mask = (1 << (c1 - c0)) - 1
        return BitMatrix(r1 - r0, c1 - c0, tuple((row >> c0) & mask for row in self.data[r0:r1]))

    @staticmethod
    def blocks(grid: Sequence[Sequence["BitMatrix"]]) -> "BitMatrix":
        """Assemble a block matrix; every block row must share heights."""
        data = []
        total_cols = sum(b.cols for b in grid[0]) if grid else 0
        for brow in grid:
            h = brow[0].rows
            for i in range(h):
                acc, shift = 0, 0
                for b in brow:
                    if b.rows != h:
                        raise ValueError("ragged block row")
                    acc |= b.data[i] << shift
                    shift += b.cols
                data.append(acc)
        return BitMatrix(len(data), total_cols, tuple(data))

    def __str__(self) -> str:
        return "\n".join(vec_to_str(r, self.cols) for r in self.data)


class Reducer:
    """Incremental basis of a subspace with combination tracking.

    Each added vector is reduced against the stored pivots (pivot = lowest set
    bit).  ``combo`` records which inserted vectors sum to each stored row, so
    membership queries can also return a witness combination.
    """

    def __init__(self):
        self.pivots: dict[int, tuple[int, int]] = {}
        self.count = 0

    def reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        piv = self.pivots
        while v:
            low = (v & -v).bit_length() - 1
            hit = piv.get(low)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        return v, combo

    def add(self, v: int) -> bool:
        """Insert the next vector; True if it enlarged the span."""
        idx = self.count
        self.count += 1
        r, combo = self.reduce(v)
        if not r:
            return False
        low = (r & -r).bit_length() - 1
        self.pivots[low] = (r, combo ^ (1 << idx))
        return True

    def express(self, v: int) -> int | None:
        """Combination of inserted vectors summing to ``v``, or None."""
        r, combo = self.reduce(v)
        return None if r else combo

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(m: BitMatrix) -> int:
    """Rank by top-down row reduction."""
    red = Reducer()
    for row in m.data:
        red.add(row)
    return red.rank


def solve(a: BitMatrix, b: int) -> int | None:
    """Some x with a x = b (column vectors as bitsets), or None."""
    red = Reducer()
    for col in a.columns:
        red.add(col)
    return red.express(b)


def kernel(a: BitMatrix) -> list[int]:
    """Basis of {x : a x = 0}; one vector per non-pivot column, in order."""
    red = Reducer()
    basis = []
    for j, col in enumerate(a.columns):
        r, combo = red.reduce(col)
        if r:
            red.pivots[(r & -r).bit_length() - 1] = (r, combo ^ (1 << j))
        else:
            basis.append(combo ^ (1 << j))
        red.count += 1
    return basis


def column_space(a: BitMatrix) -> list[int]:
    """Independent columns-derived basis of the image in pivot order."""
    red = Reducer()
    out = []
    for col in a.columns:
        if red.add(col):
            out.append(col)
    return out


def inverse(a: BitMatrix) -> BitMatrix | None:
    if not a.is_square():
        return None
    n = a.rows
    red = Reducer()
    for col in a.columns:
        red.add(col)
    if red.rank != n:
        return None
    cols = [red.express(1 << i) for i in range(n)]
    return BitMatrix.from_columns(cols, n)


def is_invertible(a: BitMatrix) -> bool:
    return a.is_square() and rank(a) == a.rows


def solve_matrix(a: BitMatrix, b: BitMatrix) -> BitMatrix | None:
    """Some x with a @ x = b, solved column by column, or None."""
    red = Reducer()
    for col in a.columns:
        red.add(col)
    cols = []
    for bc in b.columns:
        x = red.express(bc)
        if x is None:
            return None
        cols.append(x)
    return BitMatrix.from_columns(cols, a.cols)
