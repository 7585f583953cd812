import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from adjmatch.combinatorics import DeckSpec
from adjmatch.exact import exact_distribution
from adjmatch.moments import (
    ApproxDistribution,
    adjacent_joint_expectation,
    binomial_distribution,
    binomial_pmf,
    binomial_pmfs,
    covariance,
    different_rank_separated_probability,
    empirical_distribution,
    expected_matches,
    poisson_distribution,
    poisson_pmf,
    rendered_distribution,
    same_rank_separated_probability,
    separated_joint_expectation,
    soon_bound,
    soon_constant,
    total_variation,
    total_variation_exact,
    variance_matches,
)
from adjmatch.render import format_fixed
from oracles import distinct_arrangements, transfer_alpha

STANDARD = DeckSpec(4, 13)

STANDARD_BINOMIAL = [
    "0.04542", "0.14477", "0.22620", "0.23091", "0.17319", "0.10175", "0.04875",
    "0.01959", "0.00673", "0.00201", "0.00053", "0.00012", "0.00003", "0.00000",
]
# printed with trailing zeros dropped in places (0.0216, 0.0081, 0.0027)
STANDARD_POISSON = [
    "0.04979", "0.14936", "0.22404", "0.22404", "0.16803", "0.10082", "0.05041",
    "0.02160", "0.00810", "0.00270", "0.00081", "0.00022", "0.00006", "0.00001",
]

# exact rational d_TV between the standard-deck exact and binomial pmfs, as a double
DTV_STANDARD = 0.00018168686717224934


def enumerated_cov(k: int, n: int, i: int, j: int) -> Fraction:
    arrangements = distinct_arrangements(k, n)
    total = len(arrangements)
    mi = sum(a[i - 1] == a[i] for a in arrangements)
    mj = sum(a[j - 1] == a[j] for a in arrangements)
    mij = sum(a[i - 1] == a[i] and a[j - 1] == a[j] for a in arrangements)
    return Fraction(mij, total) - Fraction(mi, total) * Fraction(mj, total)


@pytest.mark.parametrize("k, n, expected", [(4, 13, 3), (1, 7, 0), (5, 2, 4)])
def test_expected_matches(k, n, expected):
    deck = DeckSpec(k, n)
    assert expected_matches(deck) == expected
    assert exact_distribution(deck).mean() == expected


def test_variance_standard_deck():
    assert variance_matches(STANDARD) == Fraction(48, 17)
    assert exact_distribution(STANDARD).variance() == Fraction(48, 17)


@pytest.mark.parametrize("k", [2, 3, 7])
def test_variance_single_rank_is_zero(k):
    assert variance_matches(DeckSpec(k, 1)) == 0


def test_variance_two_by_two():
    assert variance_matches(DeckSpec(2, 2)) == Fraction(2, 3)


def test_variance_needs_two_cards():
    with pytest.raises(ValueError):
        variance_matches(DeckSpec(1, 1))


def test_covariance_two_by_two():
    deck = DeckSpec(2, 2)
    assert covariance(deck, separated=False) == Fraction(-1, 9)
    assert covariance(deck, separated=True) == Fraction(2, 9)
    assert enumerated_cov(2, 2, 1, 2) == Fraction(-1, 9)
    assert enumerated_cov(2, 2, 1, 3) == Fraction(2, 9)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_same_rank_separated_configuration_vanishes(k):
    assert same_rank_separated_probability(DeckSpec(k, 4)) == 0


def test_joint_expectations_compose_covariance():
    for k, n in [(2, 3), (4, 5), (6, 2)]:
        deck = DeckSpec(k, n)
        p = Fraction(k - 1, k * n - 1)
        assert adjacent_joint_expectation(deck) - p * p == covariance(deck, separated=False)
        assert separated_joint_expectation(deck) - p * p == covariance(deck, separated=True)
        assert separated_joint_expectation(deck) == same_rank_separated_probability(
            deck
        ) + different_rank_separated_probability(deck)


def test_covariance_size_checks():
    with pytest.raises(ValueError):
        covariance(DeckSpec(1, 2), separated=False)
    with pytest.raises(ValueError):
        covariance(DeckSpec(3, 1), separated=True)
    assert covariance(DeckSpec(3, 1), separated=False) == 0


SMALL = [(k, n) for k in range(1, 11) for n in range(1, 11) if 3 <= k * n <= 9]


@pytest.mark.parametrize("k, n", SMALL)
def test_covariance_against_enumeration(k, n):
    deck = DeckSpec(k, n)
    assert covariance(deck, separated=False) == enumerated_cov(k, n, 1, 2)
    if k * n >= 4:
        assert covariance(deck, separated=True) == enumerated_cov(k, n, 1, 3)
        assert covariance(deck, separated=True) == enumerated_cov(k, n, 1, k * n - 1)


@pytest.mark.parametrize("k, n", [(k, n) for k in range(2, 7) for n in range(2, 9)])
def test_covariance_sign_and_balance(k, n):
    deck = DeckSpec(k, n)
    kn = k * n
    adj = covariance(deck, separated=False)
    sep = covariance(deck, separated=True)
    assert adj <= 0 <= sep
    assert 2 * (kn - 2) * abs(adj) == (kn - 2) * (kn - 3) * sep
    assert 2 * (kn - 2) * abs(adj) == Fraction(2 * (k - 1) * (kn - k), (kn - 1) ** 2)


@pytest.mark.parametrize("r", range(14))
def test_binomial_table_column(r):
    assert format_fixed(binomial_pmf(STANDARD, r), 5) == STANDARD_BINOMIAL[r]


def test_binomial_degenerate_single_suit():
    assert binomial_pmf(DeckSpec(1, 6), 0) == 1
    assert binomial_pmf(DeckSpec(1, 6), 3) == 0
    assert binomial_pmfs(DeckSpec(1, 1)) == [1]


def test_binomial_range():
    with pytest.raises(ValueError):
        binomial_pmf(STANDARD, 52)


@pytest.mark.parametrize("k, n", [(2, 3), (4, 13), (6, 5)])
def test_binomial_shares_mean_and_variance(k, n):
    deck = DeckSpec(k, n)
    pmf = binomial_pmfs(deck)
    assert sum(pmf) == 1
    mean = sum(r * p for r, p in enumerate(pmf))
    var = sum(r * r * p for r, p in enumerate(pmf)) - mean**2
    assert mean == expected_matches(deck)
    assert var == variance_matches(deck)


@pytest.mark.parametrize("r", range(14))
def test_poisson_table_column(r):
    assert format_fixed(Fraction(poisson_pmf(3.0, r)), 5) == STANDARD_POISSON[r]


def test_poisson_equal_neighbours_at_integer_rate():
    assert poisson_pmf(3.0, 2) == pytest.approx(poisson_pmf(3.0, 3), rel=1e-14)


@pytest.mark.parametrize("lam, r", [(0.5, 0), (3.0, 7), (10.0, 25), (40.0, 40)])
def test_poisson_against_direct_formula(lam, r):
    direct = math.exp(-lam) * lam**r / math.factorial(r)
    assert poisson_pmf(lam, r) == pytest.approx(direct, rel=1e-12)


def test_poisson_large_index_stays_finite():
    assert 0.0 < poisson_pmf(3.0, 200) < 1e-250
    assert poisson_pmf(3.0, 2000) == 0.0


def test_poisson_domain():
    with pytest.raises(ValueError):
        poisson_pmf(0.0, 1)
    with pytest.raises(ValueError):
        poisson_pmf(1.0, -1)


def test_poisson_distribution_truncation():
    dist = poisson_distribution(3.0, 39)
    assert dist.support_hint >= 39
    assert dist[dist.support_hint] < 1e-18
    assert dist.tail_mass < 1e-15
    assert math.fsum(dist.probabilities) + dist.tail_mass == pytest.approx(1.0, abs=1e-12)


def test_dtv_standard_deck_exact_value():
    dist = exact_distribution(STANDARD)
    d = total_variation_exact(dist.probabilities(), binomial_pmfs(STANDARD))
    assert float(d) == pytest.approx(DTV_STANDARD, abs=1e-15)
    assert total_variation(rendered_distribution(dist), binomial_distribution(STANDARD)) == (
        pytest.approx(DTV_STANDARD, abs=1e-15)
    )


def test_dtv_standard_deck_independent_route():
    # transfer-matrix counts and an inline binomial, no package code on this side
    total = math.factorial(52) // 24**13
    exact = [Fraction(a, total) for a in transfer_alpha(4, 13)] + [Fraction(0)] * 12
    p = Fraction(3, 51)
    binom = [math.comb(51, r) * p**r * (1 - p) ** (51 - r) for r in range(52)]
    d = sum(abs(x - y) for x, y in zip(exact, binom)) / 2
    assert float(d) == pytest.approx(DTV_STANDARD, abs=1e-15)


def test_dtv_identical_is_zero():
    d = binomial_distribution(DeckSpec(3, 4))
    assert total_variation(d, d) == 0.0


def test_dtv_disjoint_point_masses():
    a = ApproxDistribution("empirical", (1.0,))
    b = ApproxDistribution("empirical", (0.0, 1.0))
    assert total_variation(a, b) == 1.0


def _vector(draw_values):
    total = sum(draw_values)
    return tuple(v / total for v in draw_values)


positive_lists = st.lists(st.integers(0, 1000), min_size=1, max_size=7).filter(lambda v: sum(v) > 0)


@given(positive_lists, positive_lists)
def test_dtv_is_largest_event_gap(xs, ys):
    a = ApproxDistribution("empirical", _vector(xs))
    b = ApproxDistribution("empirical", _vector(ys))
    size = max(len(xs), len(ys))
    best = 0.0
    for mask in itertools.product([0, 1], repeat=size):
        gap = abs(sum(a[i] - b[i] for i in range(size) if mask[i]))
        best = max(best, gap)
    positive = math.fsum(max(a[i] - b[i], 0.0) for i in range(size))
    d = total_variation(a, b)
    assert d == pytest.approx(best, abs=1e-12)
    assert d == pytest.approx(positive, abs=1e-12)
    assert 0.0 <= d <= 1.0 + 1e-12


def test_approx_distribution_validation():
    with pytest.raises(ValueError):
        ApproxDistribution("binomial", (0.5, 0.4))
    with pytest.raises(ValueError):
        ApproxDistribution("binomial", (1.5, -0.5))
    with pytest.raises(ValueError):
        ApproxDistribution("gaussian", (1.0,))
    assert empirical_distribution([1, 3]).probabilities == (0.25, 0.75)


def test_soon_report_standard_deck():
    report = soon_bound(STANDARD)
    assert report.sum_abs_cov == Fraction(576, 2601)
    assert float(report.sum_abs_cov) == pytest.approx(0.221453, abs=1e-6)
    assert report.soon_constant == pytest.approx(0.332508, abs=1e-6)
    assert report.soon_bound == pytest.approx(0.073635, abs=1e-6)
    assert report.soon_bound >= DTV_STANDARD
    assert report.adjacent_cov < 0 < report.separated_cov


def test_soon_constant_against_plain_formula():
    for k, n in [(2, 2), (3, 5), (4, 13), (7, 20)]:
        deck = DeckSpec(k, n)
        kn = k * n
        p = (k - 1) / (kn - 1)
        plain = (1 - p**kn - (1 - p) ** kn) / (kn * p * (1 - p))
        assert soon_constant(deck) == pytest.approx(plain, rel=1e-12)


def test_soon_constant_limit():
    # (1-p)^(kn) tends to exp(-(k-1)), so the limit is (1 - e^-3)/3, not 1/3
    limit = -math.expm1(-3.0) / 3
    assert soon_constant(DeckSpec(4, 10**6)) == pytest.approx(limit, abs=1e-4)
    assert soon_constant(DeckSpec(4, 10**9)) == pytest.approx(limit, abs=1e-8)
    assert soon_constant(DeckSpec(4, 10**6)) < 1 / 3


def test_covariance_sum_vanishes():
    assert float(soon_bound(DeckSpec(4, 10**6)).sum_abs_cov) < 1e-5


def test_soon_bound_domain():
    with pytest.raises(ValueError):
        soon_bound(DeckSpec(1, 10))
    with pytest.raises(ValueError):
        soon_bound(DeckSpec(3, 1))


def _dtv_binomial(n: int) -> Fraction:
    deck = DeckSpec(4, n)
    return total_variation_exact(exact_distribution(deck).probabilities(), binomial_pmfs(deck))


def test_binomial_distance_decreases_with_ranks():
    values = [_dtv_binomial(n) for n in (5, 13, 26, 52)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_poisson_distance_decreases_with_ranks():
    values = []
    for n in (5, 13, 26, 52):
        dist = exact_distribution(DeckSpec(4, n))
        values.append(total_variation(rendered_distribution(dist), poisson_distribution(3.0, 3 * n)))
    assert all(a > b for a, b in zip(values, values[1:]))
