"""Bit-packed matrices over GF(2).

Rows are Python ints used as bitsets; bit ``j`` of a row is column ``j``.
That is the word-packing idiom at the sizes we need (at most 8 columns),
and it keeps elimination to one XOR per row update.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple


@dataclass(frozen=True)
class BitMatrix:
    rows: int
    cols: int
    bits: Tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != self.rows:
            raise ValueError("row count mismatch")
        mask = (1 << self.cols) - 1
        if any(r & ~mask for r in self.bits):
            raise ValueError("bits set beyond the last column")

    def entry(self, i: int, j: int) -> int:
        return (self.bits[i] >> j) & 1

    def row_string(self, i: int) -> str:
        return "".join(str(self.entry(i, j)) for j in range(self.cols))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        if not rows or not rows[0]:
            raise ValueError("empty grid")
        cols = len(rows[0])
        packed = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged grid")
            word = 0
            for j, bit in enumerate(row):
                if bit not in (0, 1):
                    raise ValueError(f"not a bit: {bit!r}")
                word |= bit << j
            packed.append(word)
        return cls(len(rows), cols, tuple(packed))


def from_signs(grid: Sequence[Sequence[int]]) -> BitMatrix:
    """+1 -> 0, -1 -> 1."""
    bits = []
    for row in grid:
        out = []
        for s in row:
            if s not in (1, -1):
                raise ValueError(f"sign grid entry must be +1 or -1, got {s!r}")
            out.append(1 if s == -1 else 0)
        bits.append(out)
    return BitMatrix.from_rows(bits)


def rank_rows(rows: Sequence[int]) -> int:
    work = list(rows)
    rank = 0
    while work:
        pivot = work.pop()
        if pivot == 0:
            continue
        rank += 1
        low = pivot & -pivot
        work = [r ^ pivot if r & low else r for r in work]
    return rank


def rank(m: BitMatrix) -> int:
    return rank_rows(m.bits)
