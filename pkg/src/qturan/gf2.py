"""GF(2) linear algebra on bit-packed vectors.

A vector in F_2^dim is stored as an int whose bit i is coordinate i.  The
dimension is capped at 64 so a vector is one machine word and elimination
is plain word XOR.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

MAX_DIM = 64

__all__ = [
    "MAX_DIM",
    "GF2Vec",
    "rank_bits",
    "rank",
    "is_basis",
    "in_span",
    "quotient_image",
    "sample_nonzero",
]


@dataclass(frozen=True)
class GF2Vec:
    """An element of F_2^dim.  Bits at positions >= dim must be zero."""

    bits: int
    dim: int

    def __post_init__(self) -> None:
        if not 0 <= self.dim <= MAX_DIM:
            raise ValueError(f"dimension must be in [0, {MAX_DIM}], got {self.dim}")
        if self.bits < 0 or self.bits >> self.dim:
            raise ValueError(f"bits 0x{self.bits:x} do not fit in dimension {self.dim}")

    @classmethod
    def zero(cls, dim: int) -> GF2Vec:
        return cls(0, dim)

    @classmethod
    def unit(cls, index: int, dim: int) -> GF2Vec:
        """Standard basis vector e_index (0-based)."""
        if not 0 <= index < dim:
            raise ValueError(f"unit index {index} out of range for dimension {dim}")
        return cls(1 << index, dim)

    def __xor__(self, other: GF2Vec) -> GF2Vec:
        if not isinstance(other, GF2Vec):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return GF2Vec(self.bits ^ other.bits, self.dim)

    def __bool__(self) -> bool:
        return self.bits != 0


def _check_dims(vs: list[GF2Vec], dim: int) -> None:
    for v in vs:
        if v.dim != dim:
            raise ValueError(f"dimension mismatch: expected {dim}, got {v.dim}")


def rank_bits(rows: Iterable[int]) -> int:
    """Rank over GF(2) of int bitset rows, by word-level Gaussian elimination."""
    pivots: dict[int, int] = {}
    for v in rows:
        while v:
            top = v.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = v
                break
            v ^= p
    return len(pivots)


def rank(vs: Iterable[GF2Vec], dim: int) -> int:
    """dim(Span(vs)); order of the input never matters."""
    vec_list = list(vs)
    _check_dims(vec_list, dim)
    return rank_bits(v.bits for v in vec_list)


def is_basis(vs: Iterable[GF2Vec], dim: int) -> bool:
    """True iff vs has exactly dim vectors and they span F_2^dim."""
    vec_list = list(vs)
    _check_dims(vec_list, dim)
    return len(vec_list) == dim and rank_bits(v.bits for v in vec_list) == dim


def in_span(v: GF2Vec, vs: Iterable[GF2Vec]) -> bool:
    """True iff v lies in Span(vs)."""
    vec_list = list(vs)
    _check_dims(vec_list, v.dim)
    pivots: dict[int, int] = {}
    for w in vec_list:
        cur = w.bits
        while cur:
            top = cur.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = cur
                break
            cur ^= p
    cur = v.bits
    while cur:
        top = cur.bit_length() - 1
        p = pivots.get(top)
        if p is None:
            return False
        cur ^= p
    return True


def _reduced_echelon(basis: list[GF2Vec]) -> dict[int, int]:
    """Fully reduced echelon rows keyed by pivot bit; raises if dependent.

    Invariant: every row has bit 1 at its own pivot and 0 at every other
    pivot, so clearing all pivots from a vector takes one pass in any order.
    """
    rows: dict[int, int] = {}
    for w in basis:
        cur = w.bits
        for t, row in rows.items():
            if (cur >> t) & 1:
                cur ^= row
        if cur == 0:
            raise ValueError("subspace basis is linearly dependent")
        top = cur.bit_length() - 1
        for t, row in rows.items():
            if (row >> top) & 1:
                rows[t] = row ^ cur
        rows[top] = cur
    return rows


def quotient_image(v: GF2Vec, subspace_basis: Iterable[GF2Vec]) -> GF2Vec:
    """Canonical representative of v + Span(subspace_basis).

    The image lives in a fixed coordinate system of dimension
    v.dim - len(subspace_basis): reduce v by the reduced echelon form of the
    basis, then pack the free (non-pivot) coordinates in increasing index
    order.  Two vectors get equal images iff their difference is in the
    subspace, so image equality is a plain bit comparison.
    """
    basis = list(subspace_basis)
    _check_dims(basis, v.dim)
    rows = _reduced_echelon(basis)
    cur = v.bits
    for top, row in rows.items():
        if (cur >> top) & 1:
            cur ^= row
    out = 0
    j = 0
    for i in range(v.dim):
        if i in rows:
            continue
        if (cur >> i) & 1:
            out |= 1 << j
        j += 1
    return GF2Vec(out, v.dim - len(rows))


def sample_nonzero(rng: random.Random, dim: int) -> GF2Vec:
    """Uniform over the 2^dim - 1 nonzero vectors, by rejection sampling."""
    if dim < 1:
        raise ValueError(f"dimension must be >= 1 to sample a nonzero vector, got {dim}")
    while True:
        bits = rng.getrandbits(dim)
        if bits:
            return GF2Vec(bits, dim)
