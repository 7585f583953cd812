"""Seeded Monte Carlo: shuffle the deck, count adjacent equal ranks, tally.

Generator contract: trials are cut into fixed blocks of ``CHUNK_TRIALS``.
Block ``i`` draws from numpy's PCG64 seeded with
``SeedSequence(seed, spawn_key=(i,))`` and shuffles each row with
``Generator.permuted`` (Fisher-Yates with rejection-sampled bounded
integers). Because the stream is tied to the block index rather than the
worker, the histogram depends only on (deck, trials, seed).
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, TextIO

import numpy as np

from .combinatorics import DeckSpec
from .render import format_fixed

CHUNK_TRIALS = 8192
MAX_SEED = 2**64 - 1


def count_matches(arrangement: Sequence[int]) -> int:
    """Number of adjacent positions holding equal ranks.

    Three in a row count as two matches, four in a row as three. The
    arrangement must use every rank the same number of times.
    """
    if len(arrangement) == 0:
        raise ValueError("empty arrangement")
    copies = set(Counter(arrangement).values())
    if len(copies) != 1:
        raise ValueError(f"ranks appear unequally often: {sorted(Counter(arrangement).items())}")
    return sum(1 for a, b in zip(arrangement, arrangement[1:]) if a == b)


@dataclass(frozen=True)
class SimulationResult:
    deck: DeckSpec
    trials: int
    seed: int
    histogram: tuple[int, ...]

    @property
    def empirical_mean(self) -> float:
        return sum(r * c for r, c in enumerate(self.histogram)) / self.trials

    def frequency(self, r: int) -> float:
        return self.histogram[r] / self.trials if 0 <= r < len(self.histogram) else 0.0


def _run_chunk(deck: DeckSpec, seed: int, index: int, size: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))
    base = np.repeat(np.arange(deck.ranks, dtype=np.int16), deck.suits)
    decks = rng.permuted(np.tile(base, (size, 1)), axis=1)
    matches = np.count_nonzero(decks[:, 1:] == decks[:, :-1], axis=1)
    return np.bincount(matches, minlength=deck.max_matches + 1)


def simulate(deck: DeckSpec, trials: int, seed: int = 0, workers: int = 1) -> SimulationResult:
    """Shuffle the deck ``trials`` times and histogram the match counts."""
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 0 <= seed <= MAX_SEED:
        raise ValueError("seed must be an unsigned 64-bit integer")
    sizes = [CHUNK_TRIALS] * (trials // CHUNK_TRIALS)
    if trials % CHUNK_TRIALS:
        sizes.append(trials % CHUNK_TRIALS)
    jobs = list(enumerate(sizes))
    total = np.zeros(deck.max_matches + 1, dtype=np.int64)
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(lambda job: _run_chunk(deck, seed, *job), jobs)
            for part in parts:
                total += part
    else:
        for index, size in jobs:
            total += _run_chunk(deck, seed, index, size)
    return SimulationResult(deck, trials, seed, tuple(int(c) for c in total))


def write_histogram_csv(result: SimulationResult, out: TextIO) -> None:
    """``matches,count,frequency`` with a header, one row per match count."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["matches", "count", "frequency"])
    for r, count in enumerate(result.histogram):
        writer.writerow([r, count, format_fixed(Fraction(count, result.trials), 6)])


def histogram_csv(result: SimulationResult) -> str:
    buf = io.StringIO()
    write_histogram_csv(result, buf)
    return buf.getvalue()


def read_histogram_csv(text: str) -> list[tuple[int, int, str]]:
    rows = list(csv.DictReader(io.StringIO(text)))
    return [(int(r["matches"]), int(r["count"]), r["frequency"]) for r in rows]
