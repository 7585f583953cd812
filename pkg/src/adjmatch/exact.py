"""Exact match-count distribution via inclusion-exclusion over glued patterns.

For every rank we pick a partition of its k cards into glued blocks. A
choice of partition for each rank yields a list of arrangements carrying at
least ``m`` forced matches; summing list sizes by ``m`` gives the overcounts
``beta_m``, the coefficients of B(x). The exact counts ``alpha_r`` are the
coefficients of A(x) = B(x - 1).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .combinatorics import (
    DeckSpec,
    composition_count,
    compositions,
    count_permutations,
    enumerate_partitions,
    factorial,
    multinomial,
)
from .render import format_fixed

DEFAULT_TERM_CEILING = 10**8
CEILING_ENV = "ADJMATCH_TERM_CEILING"

# traversals smaller than this are not worth a process pool
_PARALLEL_MIN_TERMS = 200_000


class ResourceGuardError(RuntimeError):
    """The requested deck needs more summation terms than the configured ceiling."""


class InconsistencyError(ArithmeticError):
    """An exact count came out negative; something upstream is wrong."""


def term_ceiling() -> int:
    raw = os.environ.get(CEILING_ENV)
    if raw is None:
        return DEFAULT_TERM_CEILING
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{CEILING_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{CEILING_ENV} must be positive, got {value}")
    return value


def general_term_count(deck: DeckSpec) -> int:
    """Number of partition tallies the general sum runs over."""
    return composition_count(deck.ranks, len(enumerate_partitions(deck.suits)))


def _check_ceiling(deck: DeckSpec, ceiling: int | None) -> None:
    limit = term_ceiling() if ceiling is None else ceiling
    terms = general_term_count(deck)
    if terms > limit:
        raise ResourceGuardError(
            f"deck k={deck.suits}, n={deck.ranks} needs {terms} terms "
            f"(ceiling {limit}; raise it with {CEILING_ENV})"
        )


def _check_range(name: str, value: int, top: int) -> None:
    if not 0 <= value <= top:
        raise ValueError(f"{name}={value} outside 0..{top}")


def _beta_buckets(suits: int, ranks: int, first_values: Sequence[int] | None = None) -> list[int]:
    """One pass over all tallies, bucketing list sizes by forced matches.

    ``first_values`` restricts the count given to the first partition, which
    is how the traversal is split across workers.
    """
    parts = enumerate_partitions(suits)
    glued = [p.glued_matches for p in parts]
    redundancy = [p.redundancy for p in parts]
    cards = suits * ranks
    buckets = [0] * ((suits - 1) * ranks + 1)
    last = len(parts) - 1

    def walk(j: int, remaining: int, m: int, coef: int, denom: int) -> None:
        if j == last:
            m += remaining * glued[j]
            denom *= redundancy[j] ** remaining
            value, rem = divmod(coef * factorial(cards - m), denom)
            assert rem == 0
            buckets[m] += value
            return
        for s in range(remaining, -1, -1):
            walk(
                j + 1,
                remaining - s,
                m + s * glued[j],
                coef * math.comb(remaining, s),
                denom * redundancy[j] ** s,
            )

    if last == 0:
        walk(0, ranks, 0, 1, 1)
        return buckets
    firsts = range(ranks, -1, -1) if first_values is None else first_values
    for s in firsts:
        walk(1, ranks - s, s * glued[0], math.comb(ranks, s), redundancy[0] ** s)
    return buckets


def _beta_worker(args: tuple[int, int, tuple[int, ...]]) -> list[int]:
    suits, ranks, firsts = args
    return _beta_buckets(suits, ranks, firsts)


@lru_cache(maxsize=64)
def _beta_polynomial_cached(suits: int, ranks: int, workers: int) -> tuple[int, ...]:
    if workers <= 1 or len(enumerate_partitions(suits)) == 1:
        return tuple(_beta_buckets(suits, ranks))
    # interleave first-coordinate values so workers get similar loads
    chunks = [tuple(range(ranks - w, -1, -workers)) for w in range(workers)]
    chunks = [c for c in chunks if c]
    total = [0] * ((suits - 1) * ranks + 1)
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        for part in pool.map(_beta_worker, [(suits, ranks, c) for c in chunks]):
            for m, value in enumerate(part):
                total[m] += value
    return tuple(total)


def beta_polynomial(
    deck: DeckSpec, *, ceiling: int | None = None, workers: int = 1
) -> tuple[int, ...]:
    """Coefficients ``beta_0 .. beta_{(k-1)n}`` of B(x) for a general deck."""
    _check_ceiling(deck, ceiling)
    if workers > 1 and general_term_count(deck) < _PARALLEL_MIN_TERMS:
        workers = 1
    return _beta_polynomial_cached(deck.suits, deck.ranks, workers)


def beta_general(deck: DeckSpec, m: int, *, ceiling: int | None = None) -> int:
    _check_range("m", m, deck.max_matches)
    return beta_polynomial(deck, ceiling=ceiling)[m]


def _four_suit_terms(n: int):
    """(t + w, m, list size) for every (s, t, u, v, w) with s+t+u+v+w = n.

    Patterns per rank: s = x.x.x.x, t = xx.x.x, u = xxx.x, v = xx.xx, w = xxxx.
    """
    for s, t, u, v, w in compositions(n, 5):
        m = t + 2 * u + 2 * v + 3 * w
        size, rem = divmod(
            multinomial((s, t, u, v, w)) * factorial(4 * n - m),
            24**s * 2**t * 2**v,
        )
        assert rem == 0
        yield t + w, m, size


def beta_four_suit(n: int, m: int) -> int:
    """``beta_m`` for four suits, straight from the five pattern counts."""
    _check_range("m", m, 3 * n)
    return sum(size for _, mm, size in _four_suit_terms(n) if mm == m)


def alpha_from_beta(beta: Sequence[int], r: int) -> int:
    """Coefficient of ``x^r`` in B(x - 1)."""
    degree = len(beta) - 1
    _check_range("r", r, degree)
    value = sum((-1) ** (m - r) * math.comb(m, r) * beta[m] for m in range(r, degree + 1))
    if value < 0:
        raise InconsistencyError(f"alpha_{r} = {value} < 0 from beta {tuple(beta)}")
    return value


def alpha_polynomial(beta: Sequence[int]) -> tuple[int, ...]:
    return tuple(alpha_from_beta(beta, r) for r in range(len(beta)))


def alpha_four_suit(n: int, r: int) -> int:
    """Four-suit ``alpha_r`` as a single signed sum over pattern counts.

    Accepts ``n = 0`` (the empty deck, one arrangement with no matches).
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    _check_range("r", r, 3 * n)
    value = 0
    for tw, m, size in _four_suit_terms(n):
        if m >= r:
            value += (-1) ** (tw - r) * math.comb(m, r) * size
    if value < 0:
        raise InconsistencyError(f"alpha_{r} = {value} < 0 for k=4, n={n}")
    return value


def four_suit_alphas(n: int) -> tuple[int, ...]:
    """All four-suit ``alpha_r`` in one traversal.

    Summands sharing the same ``m`` share both the binomial and the sign
    (``t + w`` and ``m`` have equal parity), so they are pooled before the
    binomial is applied.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    pooled = [0] * (3 * n + 1)
    for tw, m, size in _four_suit_terms(n):
        pooled[m] += (-1) ** tw * size
    alphas = []
    for r in range(3 * n + 1):
        value = (-1) ** r * sum(math.comb(m, r) * pooled[m] for m in range(r, 3 * n + 1))
        if value < 0:
            raise InconsistencyError(f"alpha_{r} = {value} < 0 for k=4, n={n}")
        alphas.append(value)
    return tuple(alphas)


def alpha_two_ranks(k: int, r: int) -> int:
    """Closed form for n = 2: runs of 1s and 2s interlace."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    _check_range("r", r, 2 * k - 2)
    ell, odd = divmod(r, 2)
    lower = k - ell - 1
    if odd:
        return 2 * _comb(k - 1, lower) * _comb(k - 1, lower - 1)
    return 2 * _comb(k - 1, lower) ** 2


def _comb(n: int, j: int) -> int:
    # out-of-range lower index counts as zero on both sides
    return math.comb(n, j) if j >= 0 else 0


@dataclass(frozen=True)
class ExactDistribution:
    """Exact counts ``alpha[r]`` of arrangements with ``r`` matches."""

    deck: DeckSpec
    alpha: tuple[int, ...]
    total: int

    def __post_init__(self) -> None:
        if len(self.alpha) != self.deck.max_matches + 1:
            raise ValueError(
                f"expected {self.deck.max_matches + 1} counts, got {len(self.alpha)}"
            )
        if any(a < 0 for a in self.alpha):
            raise InconsistencyError(f"negative count in {self.alpha}")
        if sum(self.alpha) != self.total:
            raise InconsistencyError(f"counts sum to {sum(self.alpha)}, expected {self.total}")

    def probability(self, r: int) -> Fraction:
        if not 0 <= r < len(self.alpha):
            return Fraction(0)
        return Fraction(self.alpha[r], self.total)

    def probabilities(self) -> list[Fraction]:
        return [Fraction(a, self.total) for a in self.alpha]

    def mean(self) -> Fraction:
        return Fraction(sum(r * a for r, a in enumerate(self.alpha)), self.total)

    def variance(self) -> Fraction:
        second = Fraction(sum(r * r * a for r, a in enumerate(self.alpha)), self.total)
        return second - self.mean() ** 2

    def render(self, r: int, places: int = 5) -> str:
        return format_fixed(self.probability(r), places)

    def as_floats(self) -> list[float]:
        return [float(p) for p in self.probabilities()]


def exact_distribution(
    deck: DeckSpec,
    *,
    method: str = "auto",
    ceiling: int | None = None,
    workers: int = 1,
) -> ExactDistribution:
    """Exact distribution of the number of matches.

    ``method`` is ``"auto"`` (n=2 closed form, then the four-suit sum, then
    the general sum), or one of ``"two_ranks"``, ``"four_suit"``, ``"general"``
    to force a route.
    """
    if method == "auto":
        if deck.ranks == 2:
            method = "two_ranks"
        elif deck.suits == 4:
            method = "four_suit"
        else:
            method = "general"
    if method == "two_ranks":
        if deck.ranks != 2:
            raise ValueError("the two-rank formula needs n=2")
        alpha = tuple(alpha_two_ranks(deck.suits, r) for r in range(deck.max_matches + 1))
    elif method == "four_suit":
        if deck.suits != 4:
            raise ValueError("the four-suit formula needs k=4")
        alpha = four_suit_alphas(deck.ranks)
    elif method == "general":
        alpha = alpha_polynomial(beta_polynomial(deck, ceiling=ceiling, workers=workers))
    else:
        raise ValueError(f"unknown method {method!r}")
    dist = ExactDistribution(deck, alpha, count_permutations(deck))
    if alpha[-1] != factorial(deck.ranks):
        raise InconsistencyError(f"top count {alpha[-1]} != {deck.ranks}!")
    return dist


def max_match_probability(deck: DeckSpec) -> Fraction:
    """Probability that every rank sits in one solid block: ``n! (k!)^n / (kn)!``."""
    return Fraction(
        factorial(deck.ranks) * factorial(deck.suits) ** deck.ranks, factorial(deck.cards)
    )
