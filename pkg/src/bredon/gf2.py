"""Exact linear algebra over the two-element field.

Vectors are Python ints used as bitmasks (bit i = coordinate i), so all
arithmetic is XOR and everything stays exact at any size.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class Basis:
    """Row-echelon basis of a GF(2) subspace, grown one vector at a time.

    Internally keeps one reduced vector per leading (highest set) bit.
    """

    def __init__(self, vectors: Iterable[int] = ()):
        self.pivots: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        """Reduce v against the basis; 0 means v is in the span."""
        while v:
            lead = v.bit_length() - 1
            piv = self.pivots.get(lead)
            if piv is None:
                return v
            v ^= piv
        return 0

    def add(self, v: int) -> bool:
        """Insert v; returns True if it enlarged the span."""
        v = self.reduce(v)
        if v:
            self.pivots[v.bit_length() - 1] = v
            return True
        return False

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def copy(self) -> "Basis":
        b = Basis()
        b.pivots = dict(self.pivots)
        return b

    @property
    def dim(self) -> int:
        return len(self.pivots)


def rank(vectors: Iterable[int]) -> int:
    """Rank of the span of the given bitmask vectors."""
    return Basis(vectors).dim


def kernel_basis(columns: Sequence[int]) -> list[int]:
    """Kernel of the matrix whose j-th column is columns[j].

    Returns combination masks over column indices: bit j set in a returned
    mask means column j participates in that kernel element.
    """
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for j, col in enumerate(columns):
        combo = 1 << j
        while col:
            lead = col.bit_length() - 1
            hit = pivots.get(lead)
            if hit is None:
                break
            col ^= hit[0]
            combo ^= hit[1]
        if col:
            pivots[col.bit_length() - 1] = (col, combo)
        else:
            kernel.append(combo)
    return kernel


def quotient_rank(vectors: Iterable[int], modulo: Basis) -> int:
    """Dimension of span(vectors) inside the quotient by span(modulo)."""
    work = modulo.copy()
    extra = 0
    for v in vectors:
        if work.add(v):
            extra += 1
    return extra


def vector_from_bits(bits: Iterable[int]) -> int:
    v = 0
    for b in bits:
        v |= 1 << b
    return v


def bits_of(v: int) -> list[int]:
    out = []
    i = 0
    while v:
        if v & 1:
            out.append(i)
        v >>= 1
        i += 1
    return out
