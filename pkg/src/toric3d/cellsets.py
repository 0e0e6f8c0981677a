"""Bit-indexed subsets of lattice cells.

Cells are dense 0-based ids, so a subset is stored as a Python int whose
bit ``i`` is set when cell ``i`` is a member.  Symmetric difference, the
workhorse of every boundary computation, is then a single XOR.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def _bits_of(ids: Iterable[int]) -> int:
    bits = 0
    for i in ids:
        if i < 0:
            raise ValueError(f"negative cell id {i}")
        bits |= 1 << i
    return bits


class CellSet:
    """Immutable subset of ``range(universe)``."""

    __slots__ = ("_bits", "_universe")

    def __init__(self, universe: int, bits: int = 0):
        if bits >> universe:
            raise ValueError(f"cell id out of range for universe of size {universe}")
        self._bits = bits
        self._universe = universe

    @classmethod
    def from_ids(cls, universe: int, ids: Iterable[int]):
        return cls(universe, _bits_of(ids))

    @classmethod
    def empty(cls, universe: int):
        return cls(universe, 0)

    @classmethod
    def full(cls, universe: int):
        return cls(universe, (1 << universe) - 1)

    @property
    def bits(self) -> int:
        return self._bits

    @property
    def universe(self) -> int:
        return self._universe

    @property
    def weight(self) -> int:
        return self._bits.bit_count()

    def __len__(self) -> int:
        return self.weight

    def __bool__(self) -> bool:
        return self._bits != 0

    def __contains__(self, i: int) -> bool:
        return i >= 0 and (self._bits >> i) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        bits = self._bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def ids(self) -> list[int]:
        return list(self)

    def _check(self, other: "CellSet") -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other._universe != self._universe:
            raise ValueError("cell sets over different universes")

    def __xor__(self, other):
        self._check(other)
        return type(self)(self._universe, self._bits ^ other._bits)

    def __or__(self, other):
        self._check(other)
        return type(self)(self._universe, self._bits | other._bits)

    def __and__(self, other):
        self._check(other)
        return type(self)(self._universe, self._bits & other._bits)

    def __sub__(self, other):
        self._check(other)
        return type(self)(self._universe, self._bits & ~other._bits)

    def complement(self):
        return type(self)(self._universe, ((1 << self._universe) - 1) ^ self._bits)

    def issubset(self, other) -> bool:
        self._check(other)
        return self._bits & ~other._bits == 0

    def isdisjoint(self, other) -> bool:
        self._check(other)
        return self._bits & other._bits == 0

    def with_id(self, i: int):
        return type(self)(self._universe, self._bits | (1 << i))

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self._bits == other._bits and self._universe == other._universe

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._universe, self._bits))

    def __repr__(self) -> str:
        shown = self.ids()
        if len(shown) > 12:
            body = ", ".join(map(str, shown[:12])) + ", ..."
        else:
            body = ", ".join(map(str, shown))
        return f"{type(self).__name__}({{{body}}}, universe={self._universe})"


class FaceSet(CellSet):
    """Subset of faces: error supports, erasures, artificial boundaries."""

    __slots__ = ()


class EdgeSet(CellSet):
    """Subset of edges: syndromes and exploration frontiers."""

    __slots__ = ()
