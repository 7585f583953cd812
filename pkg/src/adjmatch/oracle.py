"""Brute-force ground truth for small decks.

Two exhaustive enumerations are available:

* ``next_permutation`` walks every distinct arrangement of the multiset in
  lexicographic order.
* ``canonical_arrangements`` walks one arrangement per relabeling orbit:
  those in which rank ``i`` first appears before rank ``i + 1``. All ranks
  have the same multiplicity, so each orbit holds exactly ``n!``
  arrangements, and relabeling changes neither the match count nor any
  match indicator.

Both count every arrangement with equal weight, the uniform measure on the
``(kn)!/(k!)^n`` distinct arrangements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .combinatorics import DeckSpec, count_permutations, factorial
from .exact import ExactDistribution
from .simulation import count_matches

DEFAULT_CAP = 14


class OracleTooLargeError(RuntimeError):
    """The deck has more cards than the oracle is allowed to enumerate."""


def next_permutation(seq: list[int]) -> bool:
    """Advance ``seq`` in place to its lexicographic successor.

    Returns False (leaving ``seq`` sorted ascending) once it wraps around.
    Repeated values are handled, so each distinct arrangement comes up once.
    """
    i = len(seq) - 2
    while i >= 0 and seq[i] >= seq[i + 1]:
        i -= 1
    if i < 0:
        seq.reverse()
        return False
    j = len(seq) - 1
    while seq[j] <= seq[i]:
        j -= 1
    seq[i], seq[j] = seq[j], seq[i]
    seq[i + 1 :] = reversed(seq[i + 1 :])
    return True


def multiset_permutations(deck: DeckSpec) -> Iterator[tuple[int, ...]]:
    seq = deck.cards_list()
    yield tuple(seq)
    while next_permutation(seq):
        yield tuple(seq)


def canonical_arrangements(deck: DeckSpec) -> Iterator[tuple[int, ...]]:
    """Arrangements whose ranks first occur in the order 1, 2, ..., n."""
    k, n, size = deck.suits, deck.ranks, deck.cards
    remaining = [k] * (n + 1)
    seq = [0] * size

    def walk(pos: int, introduced: int) -> Iterator[tuple[int, ...]]:
        if pos == size:
            yield tuple(seq)
            return
        for rank in range(1, introduced + 1):
            if remaining[rank]:
                remaining[rank] -= 1
                seq[pos] = rank
                yield from walk(pos + 1, introduced)
                remaining[rank] += 1
        if introduced < n:
            rank = introduced + 1
            remaining[rank] -= 1
            seq[pos] = rank
            yield from walk(pos + 1, rank)
            remaining[rank] += 1

    return walk(0, 0)


def _weighted_arrangements(deck: DeckSpec, cap: int, symmetry: bool):
    if deck.cards > cap:
        raise OracleTooLargeError(f"{deck.cards} cards exceeds the oracle cap of {cap}")
    if symmetry:
        return canonical_arrangements(deck), factorial(deck.ranks)
    return multiset_permutations(deck), 1


def brute_force_alpha(
    deck: DeckSpec, *, cap: int = DEFAULT_CAP, symmetry: bool = True
) -> ExactDistribution:
    """Tally match counts over every arrangement of the deck."""
    arrangements, weight = _weighted_arrangements(deck, cap, symmetry)
    alpha = [0] * (deck.max_matches + 1)
    for arrangement in arrangements:
        alpha[count_matches(arrangement)] += weight
    return ExactDistribution(deck, tuple(alpha), count_permutations(deck))


@dataclass(frozen=True)
class IndicatorMoments:
    """Moments of the match indicators at 1-based pair positions ``i`` and ``j``."""

    i: int
    j: int
    mean_i: Fraction
    mean_j: Fraction
    joint: Fraction

    @property
    def covariance(self) -> Fraction:
        return self.joint - self.mean_i * self.mean_j


def brute_force_indicator_moments(
    deck: DeckSpec, i: int, j: int, *, cap: int = DEFAULT_CAP, symmetry: bool = True
) -> IndicatorMoments:
    """``E(M_i)``, ``E(M_j)``, ``E(M_i M_j)`` by enumeration.

    ``M_i`` is 1 when cards ``i`` and ``i + 1`` (1-based) share a rank.
    """
    last = deck.cards - 1
    if not (1 <= i <= last and 1 <= j <= last) or i == j:
        raise ValueError(f"positions must be distinct and in 1..{last}, got {i}, {j}")
    arrangements, weight = _weighted_arrangements(deck, cap, symmetry)
    hits_i = hits_j = hits_ij = 0
    for a in arrangements:
        mi = a[i - 1] == a[i]
        mj = a[j - 1] == a[j]
        hits_i += mi
        hits_j += mj
        hits_ij += mi and mj
    total = count_permutations(deck)
    return IndicatorMoments(
        i,
        j,
        Fraction(hits_i * weight, total),
        Fraction(hits_j * weight, total),
        Fraction(hits_ij * weight, total),
    )


def brute_force_indicator_means(
    deck: DeckSpec, *, cap: int = DEFAULT_CAP, symmetry: bool = True
) -> list[Fraction]:
    """``E(M_i)`` for every pair position ``i = 1 .. kn-1``."""
    arrangements, weight = _weighted_arrangements(deck, cap, symmetry)
    hits = [0] * (deck.cards - 1)
    for a in arrangements:
        for pos in range(deck.cards - 1):
            if a[pos] == a[pos + 1]:
                hits[pos] += 1
    total = count_permutations(deck)
    return [Fraction(h * weight, total) for h in hits]
