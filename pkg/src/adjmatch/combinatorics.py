"""Exact integer combinatorics: decks, factorials, multinomials, partitions.

Everything here works on Python ints, so no count ever overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Sequence


@dataclass(frozen=True)
class DeckSpec:
    """A deck with ``suits`` identical copies of each of ``ranks`` ranks."""

    suits: int
    ranks: int

    def __post_init__(self) -> None:
        for name in ("suits", "ranks"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    @property
    def cards(self) -> int:
        return self.suits * self.ranks

    @property
    def max_matches(self) -> int:
        return (self.suits - 1) * self.ranks

    def cards_list(self) -> list[int]:
        """The sorted multiset ``[1]*k + [2]*k + ... + [n]*k``."""
        return [rank for rank in range(1, self.ranks + 1) for _ in range(self.suits)]


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    return math.factorial(n)


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    return _factorial(n)


def multinomial(parts: Sequence[int]) -> int:
    """``(sum parts)! / prod(part!)``, built from exact binomials."""
    result = 1
    total = 0
    for part in parts:
        if part < 0:
            raise ValueError(f"negative multinomial part {part}")
        total += part
        result *= math.comb(total, part)
    return result


@dataclass(frozen=True, order=True)
class Partition:
    """A partition of k as a multiplicity vector.

    ``multiplicities[i - 1]`` is the number of parts equal to ``i``. Read as a
    way to glue the k cards of one rank into blocks, ``parts`` is how many
    blocks there are and ``glued_matches`` is how many matches the gluing
    forces.
    """

    multiplicities: tuple[int, ...]

    def __post_init__(self) -> None:
        k = len(self.multiplicities)
        if k == 0 or any(m < 0 or m > k for m in self.multiplicities):
            raise ValueError(f"invalid multiplicity vector {self.multiplicities}")
        if self.size != k:
            raise ValueError(
                f"multiplicities {self.multiplicities} sum to {self.size}, expected {k}"
            )

    @property
    def size(self) -> int:
        return sum(i * m for i, m in enumerate(self.multiplicities, start=1))

    @property
    def parts(self) -> int:
        return sum(self.multiplicities)

    @property
    def glued_matches(self) -> int:
        return sum((i - 1) * m for i, m in enumerate(self.multiplicities, start=1))

    @property
    def redundancy(self) -> int:
        """Product of ``pi_i!``: equal-sized blocks of a rank are interchangeable."""
        result = 1
        for m in self.multiplicities:
            result *= factorial(m)
        return result

    def blocks(self) -> list[int]:
        """Block sizes in non-increasing order, e.g. ``[2, 1, 1]`` for (2,1,0,0)."""
        return [
            i
            for i in range(len(self.multiplicities), 0, -1)
            for _ in range(self.multiplicities[i - 1])
        ]


def _partitions_desc(k: int, largest: int) -> Iterator[list[int]]:
    if k == 0:
        yield []
        return
    for part in range(min(k, largest), 0, -1):
        for rest in _partitions_desc(k - part, part):
            yield [part] + rest


@lru_cache(maxsize=None)
def enumerate_partitions(k: int) -> tuple[Partition, ...]:
    """All partitions of ``k``, sorted descending-lexicographically by multiplicity vector.

    For k=4 that is (4,0,0,0), (2,1,0,0), (1,0,1,0), (0,2,0,0), (0,0,0,1),
    i.e. all singletons first and the fully glued block last.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    result = []
    for blocks in _partitions_desc(k, k):
        mult = [0] * k
        for b in blocks:
            mult[b - 1] += 1
        result.append(Partition(tuple(mult)))
    result.sort(reverse=True)
    for p in result:
        assert p.parts + p.glued_matches == k
    return tuple(result)


def count_permutations(deck: DeckSpec) -> int:
    """Number of distinct arrangements, ``(kn)! / (k!)^n``."""
    total, rem = divmod(factorial(deck.cards), factorial(deck.suits) ** deck.ranks)
    assert rem == 0
    return total


def compositions(n: int, length: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``n`` into ``length`` non-negative parts.

    Ordered lexicographically with the first coordinate descending, so
    ``(n, 0, ..., 0)`` comes first.
    """
    if length < 1:
        raise ValueError("length must be positive")
    if length == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, length - 1):
            yield (first,) + rest


def composition_count(n: int, length: int) -> int:
    return math.comb(n + length - 1, length - 1)


@dataclass(frozen=True)
class PartitionTally:
    """How many of the deck's ranks are glued according to each partition."""

    deck: DeckSpec
    counts: Mapping[Partition, int]

    def __post_init__(self) -> None:
        if any(c < 0 for c in self.counts.values()):
            raise ValueError("tally counts must be non-negative")
        if sum(self.counts.values()) != self.deck.ranks:
            raise ValueError(
                f"tally counts sum to {sum(self.counts.values())}, expected {self.deck.ranks}"
            )
        if any(p.size != self.deck.suits for p in self.counts):
            raise ValueError("every partition must be a partition of the suit count")

    @property
    def forced_matches(self) -> int:
        return sum(c * p.glued_matches for p, c in self.counts.items())

    @property
    def objects(self) -> int:
        return sum(c * p.parts for p, c in self.counts.items())

    def arrangements(self) -> int:
        """Size of the list of glued arrangements this tally generates."""
        denom = 1
        for p, c in self.counts.items():
            denom *= p.redundancy**c
        numer = multinomial(list(self.counts.values())) * factorial(self.objects)
        value, rem = divmod(numer, denom)
        assert rem == 0
        return value


def iter_tallies(deck: DeckSpec) -> Iterator[PartitionTally]:
    parts = enumerate_partitions(deck.suits)
    for comp in compositions(deck.ranks, len(parts)):
        yield PartitionTally(deck, {p: c for p, c in zip(parts, comp) if c})
