"""Moments of the match count, its binomial and Poisson surrogates, and distances.

The match count is a sum of ``kn - 1`` dependent indicators, one per
adjacent pair of positions, each with success probability
``p = (k-1)/(kn-1)``. The binomial surrogate uses the same number of
independent indicators with the same ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .combinatorics import DeckSpec
from .exact import ExactDistribution

KINDS = ("binomial", "poisson", "empirical", "exact-rendered")

# Poisson terms are carried at least until the pmf falls below this
POISSON_CUTOFF = 1e-18


@dataclass(frozen=True)
class ApproxDistribution:
    """A finite probability vector indexed by match count.

    ``tail_mass`` is the probability beyond the last carried index; only a
    truncated Poisson has a non-zero tail.
    """

    kind: str
    probabilities: tuple[float, ...]
    tail_mass: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if any(not 0.0 <= x <= 1.0 for x in self.probabilities):
            raise ValueError("probabilities must lie in [0, 1]")
        total = math.fsum(self.probabilities) + self.tail_mass
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities plus tail sum to {total!r}, not 1")

    @property
    def support_hint(self) -> int:
        return len(self.probabilities) - 1

    def __getitem__(self, r: int) -> float:
        return self.probabilities[r] if 0 <= r < len(self.probabilities) else 0.0


def match_probability(deck: DeckSpec) -> Fraction:
    """Chance that a given adjacent pair matches, ``(k-1)/(kn-1)``."""
    if deck.cards == 1:
        return Fraction(0)
    return Fraction(deck.suits - 1, deck.cards - 1)


def expected_matches(deck: DeckSpec) -> Fraction:
    return Fraction(deck.suits - 1)


def variance_matches(deck: DeckSpec) -> Fraction:
    """``k(k-1)(n-1)/(kn-1)``, shared by the match count and its binomial surrogate."""
    k, n = deck.suits, deck.ranks
    if deck.cards < 2:
        raise ValueError("variance needs at least two cards")
    return Fraction(k * (k - 1) * (n - 1), k * n - 1)


def adjacent_joint_expectation(deck: DeckSpec) -> Fraction:
    """``E(M_i M_{i+1})``: three consecutive cards of one rank."""
    k, kn = deck.suits, deck.cards
    if kn < 3:
        raise ValueError("adjacent pairs of pairs need at least three cards")
    return Fraction((k - 1) * (k - 2), (kn - 1) * (kn - 2))


def same_rank_separated_probability(deck: DeckSpec) -> Fraction:
    """``xx ... xx`` with all four cards of one rank; zero when k <= 3."""
    k, kn = deck.suits, deck.cards
    if kn < 4:
        raise ValueError("separated pairs need at least four cards")
    return Fraction((k - 1) * (k - 2) * (k - 3), (kn - 1) * (kn - 2) * (kn - 3))


def different_rank_separated_probability(deck: DeckSpec) -> Fraction:
    """``xx ... yy`` with x and y different ranks."""
    k, kn = deck.suits, deck.cards
    if kn < 4:
        raise ValueError("separated pairs need at least four cards")
    return Fraction((k - 1) ** 2 * (kn - k), (kn - 1) * (kn - 2) * (kn - 3))


def separated_joint_expectation(deck: DeckSpec) -> Fraction:
    """``E(M_i M_j)`` for ``|i - j| > 1``."""
    return same_rank_separated_probability(deck) + different_rank_separated_probability(deck)


def covariance(deck: DeckSpec, separated: bool) -> Fraction:
    """Closed-form ``Cov(M_i, M_j)`` for adjacent or separated pairs of positions."""
    k, kn = deck.suits, deck.cards
    if separated:
        if kn < 4:
            raise ValueError("separated pairs need at least four cards")
        return Fraction(2 * (k - 1) * (kn - k), (kn - 1) ** 2 * (kn - 2) * (kn - 3))
    if kn < 3:
        raise ValueError("adjacent pairs of pairs need at least three cards")
    return Fraction((k - 1) * (k - kn), (kn - 1) ** 2 * (kn - 2))


def binomial_pmf(deck: DeckSpec, r: int) -> Fraction:
    trials = deck.cards - 1
    if not 0 <= r <= trials:
        raise ValueError(f"r={r} outside 0..{trials}")
    p = match_probability(deck)
    return math.comb(trials, r) * p**r * (1 - p) ** (trials - r)


def binomial_pmfs(deck: DeckSpec) -> list[Fraction]:
    return [binomial_pmf(deck, r) for r in range(deck.cards)]


def poisson_pmf(lam: float, r: int) -> float:
    """``exp(-lam) lam^r / r!`` evaluated in log space."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if r < 0:
        raise ValueError("r must be non-negative")
    return math.exp(r * math.log(lam) - lam - math.lgamma(r + 1))


def binomial_distribution(deck: DeckSpec) -> ApproxDistribution:
    return ApproxDistribution("binomial", tuple(float(x) for x in binomial_pmfs(deck)))


def poisson_distribution(lam: float, min_support: int = 0) -> ApproxDistribution:
    """Poisson pmf carried through ``min_support`` and past the mode until below 1e-18."""
    probs = []
    r = 0
    while True:
        value = poisson_pmf(lam, r)
        probs.append(value)
        if r >= min_support and r > lam and value < POISSON_CUTOFF:
            break
        r += 1
    tail = max(0.0, 1.0 - math.fsum(probs))
    return ApproxDistribution("poisson", tuple(probs), tail)


def rendered_distribution(dist: ExactDistribution) -> ApproxDistribution:
    return ApproxDistribution("exact-rendered", tuple(dist.as_floats()))


def empirical_distribution(histogram: Sequence[int]) -> ApproxDistribution:
    trials = sum(histogram)
    return ApproxDistribution("empirical", tuple(c / trials for c in histogram))


def total_variation(a: ApproxDistribution, b: ApproxDistribution) -> float:
    """Half the L1 distance, zero-padding the shorter vector.

    Tail mass is treated as lying beyond both carried supports.
    """
    size = max(len(a.probabilities), len(b.probabilities))
    diff = math.fsum(abs(a[r] - b[r]) for r in range(size))
    return 0.5 * (diff + a.tail_mass + b.tail_mass)


def total_variation_exact(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    size = max(len(a), len(b))
    pad_a = list(a) + [Fraction(0)] * (size - len(a))
    pad_b = list(b) + [Fraction(0)] * (size - len(b))
    return sum((abs(x - y) for x, y in zip(pad_a, pad_b)), Fraction(0)) / 2


@dataclass(frozen=True)
class CovarianceReport:
    deck: DeckSpec
    adjacent_cov: Fraction
    separated_cov: Fraction
    sum_abs_cov: Fraction
    soon_constant: float
    soon_bound: float


def soon_constant(deck: DeckSpec) -> float:
    """``(1 - p^N - (1-p)^N) / (N p (1-p))`` with ``N = kn``."""
    kn = deck.cards
    p = float(match_probability(deck))
    if not 0.0 < p < 1.0:
        raise ValueError("the constant needs 0 < p < 1, i.e. k >= 2 and n >= 2")
    numer = -math.expm1(kn * math.log1p(-p)) - p**kn
    return numer / (kn * p * (1.0 - p))


def soon_bound(deck: DeckSpec) -> CovarianceReport:
    """Upper bound on d_TV(M, M') from the pairwise covariances."""
    k, kn = deck.suits, deck.cards
    if k < 2 or kn < 4:
        raise ValueError("the bound needs k >= 2 and at least four cards")
    adj = covariance(deck, separated=False)
    sep = covariance(deck, separated=True)
    # 2(kn-2) ordered adjacent pairs, (kn-2)(kn-3) ordered separated pairs
    total = 2 * (kn - 2) * abs(adj) + (kn - 2) * (kn - 3) * abs(sep)
    assert total == Fraction(4 * (k - 1) * (kn - k), (kn - 1) ** 2)
    c = soon_constant(deck)
    return CovarianceReport(deck, adj, sep, total, c, c * float(total))
