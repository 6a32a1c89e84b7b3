"""GF(2) linear algebra on bit-packed rows (Python ints)."""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence


class EchelonBasis:
    """Incrementally reduced row space.

    Rows are ints; bit j is column j.  Each stored row has a distinct pivot
    (its lowest set bit) and no other stored row has that bit set, so
    reduction is a single pass.
    """

    def __init__(self):
        self.rows: Dict[int, int] = {}  # pivot bit -> row
        self.tags: Dict[int, int] = {}  # pivot bit -> combination of inputs
        self.mask = 0  # union of pivot bits

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, v, tag=0):
        """Return (remainder, tag) after clearing all pivot columns of v."""
        while v:
            hit = v & self.mask
            if not hit:
                break
            low = hit & -hit
            v ^= self.rows[low]
            tag ^= self.tags[low]
        return v, tag

    def add(self, v, tag=0):
        """Insert v; return True if it enlarged the span."""
        v, tag = self.reduce(v, tag)
        if not v:
            return False
        low = v & -v
        for p, row in list(self.rows.items()):
            if row & low:
                self.rows[p] = row ^ v
                self.tags[p] ^= tag
        self.rows[low] = v
        self.tags[low] = tag
        self.mask |= low
        return True

    def contains(self, v):
        return self.reduce(v)[0] == 0

    def solve(self, v) -> Optional[int]:
        """A tag combination producing v, or None if v is outside the span."""
        rem, tag = self.reduce(v)
        return tag if rem == 0 else None


def rank(rows: Sequence[int]) -> int:
    basis = EchelonBasis()
    for r in rows:
        basis.add(r)
    return basis.rank


def kernel(rows: Sequence[int]) -> List[int]:
    """Basis of {x : sum x_i rows[i] = 0}, as bitmasks over the row indices."""
    basis = EchelonBasis()
    out = []
    for i, r in enumerate(rows):
        rem, tag = basis.reduce(r, 1 << i)
        if rem:
            basis.add(rem, tag)
        else:
            out.append(tag)
    return out


def in_span(v: int, rows: Sequence[int]) -> bool:
    basis = EchelonBasis()
    for r in rows:
        basis.add(r)
    return basis.contains(v)


def bits(v):
    """Indices of set bits in increasing order."""
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out
