"""Exact and approximate distributions of adjacent same-rank matches in a shuffled deck."""

from .combinatorics import (
    DeckSpec,
    Partition,
    PartitionTally,
    count_permutations,
    enumerate_partitions,
    factorial,
    multinomial,
)
from .exact import (
    ExactDistribution,
    InconsistencyError,
    ResourceGuardError,
    alpha_four_suit,
    alpha_from_beta,
    alpha_two_ranks,
    beta_four_suit,
    beta_general,
    beta_polynomial,
    exact_distribution,
    max_match_probability,
)
from .moments import (
    ApproxDistribution,
    CovarianceReport,
    binomial_pmf,
    covariance,
    expected_matches,
    poisson_pmf,
    soon_bound,
    total_variation,
    variance_matches,
)
from .oracle import brute_force_alpha, brute_force_indicator_moments
from .simulation import SimulationResult, count_matches, simulate

__version__ = "0.1.0"
