from fractions import Fraction

import pytest

from adjmatch.combinatorics import DeckSpec, count_permutations, factorial
from adjmatch.moments import covariance
from adjmatch.oracle import (
    OracleTooLargeError,
    brute_force_alpha,
    brute_force_indicator_means,
    brute_force_indicator_moments,
    canonical_arrangements,
    multiset_permutations,
    next_permutation,
)
from oracles import alpha_by_permutations, distinct_arrangements

TINY = [(k, n) for k in range(1, 9) for n in range(1, 9) if k * n <= 8]
SMALL = [(k, n) for k in range(1, 11) for n in range(1, 11) if k * n <= 10]


def test_next_permutation_steps():
    seq = [1, 1, 2, 2]
    seen = [tuple(seq)]
    while next_permutation(seq):
        seen.append(tuple(seq))
    assert seen == [
        (1, 1, 2, 2), (1, 2, 1, 2), (1, 2, 2, 1), (2, 1, 1, 2), (2, 1, 2, 1), (2, 2, 1, 1),
    ]
    assert seq == [1, 1, 2, 2]


@pytest.mark.parametrize("k, n", TINY)
def test_multiset_permutations_are_all_distinct_arrangements(k, n):
    got = list(multiset_permutations(DeckSpec(k, n)))
    assert len(got) == len(set(got))
    assert set(got) == distinct_arrangements(k, n)
    assert got == sorted(got)


@pytest.mark.parametrize("k, n", SMALL)
def test_canonical_orbits_cover_everything(k, n):
    deck = DeckSpec(k, n)
    reps = list(canonical_arrangements(deck))
    assert len(reps) == len(set(reps))
    assert len(reps) * factorial(n) == count_permutations(deck)
    for rep in reps[:50]:
        firsts = [rep.index(r) for r in range(1, n + 1)]
        assert firsts == sorted(firsts)


ENUMERABLE = [(k, n) for k, n in SMALL if count_permutations(DeckSpec(k, n)) <= 200_000]


@pytest.mark.parametrize("k, n", ENUMERABLE)
def test_orbit_and_full_enumeration_agree(k, n):
    deck = DeckSpec(k, n)
    assert brute_force_alpha(deck).alpha == brute_force_alpha(deck, symmetry=False).alpha


def test_example_deck():
    assert brute_force_alpha(DeckSpec(4, 2)).alpha == (2, 6, 18, 18, 18, 6, 2)


def test_two_by_two():
    assert brute_force_alpha(DeckSpec(2, 2)).alpha == (2, 2, 2)


def test_distinct_cards():
    dist = brute_force_alpha(DeckSpec(1, 4))
    assert dist.alpha == (24,)


@pytest.mark.parametrize("k, n", TINY)
def test_against_itertools(k, n):
    assert list(brute_force_alpha(DeckSpec(k, n), symmetry=False).alpha) == alpha_by_permutations(k, n)


def test_cap():
    with pytest.raises(OracleTooLargeError):
        brute_force_alpha(DeckSpec(3, 5))
    with pytest.raises(OracleTooLargeError):
        brute_force_alpha(DeckSpec(2, 3), cap=5)


def test_indicator_moments_two_by_two():
    deck = DeckSpec(2, 2)
    assert brute_force_indicator_moments(deck, 1, 2).covariance == Fraction(-1, 9)
    assert brute_force_indicator_moments(deck, 1, 3).covariance == Fraction(2, 9)
    full = brute_force_indicator_moments(deck, 1, 3, symmetry=False)
    assert full.covariance == Fraction(2, 9)
    assert full.joint == Fraction(1, 3)


@pytest.mark.parametrize("bad", [(0, 1), (1, 1), (2, 4)])
def test_indicator_positions_validated(bad):
    with pytest.raises(ValueError):
        brute_force_indicator_moments(DeckSpec(2, 2), *bad)


@pytest.mark.parametrize("k, n", [(k, n) for k, n in SMALL if k * n >= 2])
def test_indicator_means_are_position_free(k, n):
    deck = DeckSpec(k, n)
    means = brute_force_indicator_means(deck)
    assert means == [Fraction(k - 1, k * n - 1)] * (k * n - 1)


@pytest.mark.parametrize("k, n", [(k, n) for k, n in SMALL if k * n >= 3])
def test_lemma_values_against_enumeration(k, n):
    deck = DeckSpec(k, n)
    last = k * n - 1
    for i, j in [(1, 2), (last - 1, last)]:
        assert brute_force_indicator_moments(deck, i, j).covariance == covariance(deck, False)
    if k * n >= 4:
        for i, j in [(1, 3), (1, last), (2, last)]:
            if abs(i - j) > 1:
                assert brute_force_indicator_moments(deck, i, j).covariance == covariance(deck, True)
