import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from models.errors import ParameterRangeError, ScaleError
from models.schemas import SubsetSpec
from services.classical_service import (
    IndexOracle, average_case_reduction, bayes_uniformity_check, bounds_report, draw_then_guess_rate,
    guess_outside, lower_bound_queries, permutation_image_counts, random_guess_player,
    random_guess_success, sample_complexity_success, single_sample_guess_success, stirling2_row,
    unique_draw_distribution,
)
from tests.conftest import within_sigmas


class FixedRng:
    """Stands in for a Generator whose next integer draw is known."""

    def __init__(self, value: int):
        self.value = value

    def integers(self, high):
        assert 0 <= self.value < high
        return self.value


# ─── Lower bound ──────────────────────────────────────────────────────────────

def test_lower_bound_headline_number():
    assert lower_bound_queries(1 << 16, 1 << 15, Fraction(1, 6)) == 16384


def test_lower_bound_edges():
    assert lower_bound_queries(64, 20, Fraction(1, 2)) == 20
    assert lower_bound_queries(64, 32, 0) == 0
    assert lower_bound_queries(64, 8, 0) < 0


def test_lower_bound_accepts_strings_and_floats():
    assert lower_bound_queries(1 << 16, 1 << 15, "1/6") == 16384
    assert lower_bound_queries(16, 8, 0.5) == 8


@given(
    n=st.integers(min_value=2, max_value=20),
    data=st.data(),
)
def test_lower_bound_monotone(n, data):
    N = 1 << n
    K = data.draw(st.integers(min_value=1, max_value=N - 2))
    a = data.draw(st.integers(min_value=0, max_value=50))
    b = data.draw(st.integers(min_value=a, max_value=50))
    d1, d2 = Fraction(a, 100), Fraction(b, 100)
    assert lower_bound_queries(N, K, d1) <= lower_bound_queries(N, K, d2)
    assert lower_bound_queries(N, K, d1) <= lower_bound_queries(N, K + 1, d1)


@pytest.mark.parametrize("N, K, delta", [(16, 0, 0), (16, 16, 0), (16, 8, -0.1), (16, 8, 0.7)])
def test_lower_bound_rejects_bad_parameters(N, K, delta):
    with pytest.raises(ParameterRangeError):
        lower_bound_queries(N, K, delta)


def test_lower_bound_is_met_by_the_unseen_guess():
    checked = 0
    for n in range(2, 9):
        N = 1 << n
        for K in range(1, N):
            for delta in (Fraction(0), Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)):
                q = lower_bound_queries(N, K, delta)
                if q.denominator != 1 or not 0 <= q <= K:
                    continue
                assert random_guess_success(N, K, int(q)) == Fraction(1, 2) + delta
                checked += 1
    assert random_guess_success(1 << 16, 1 << 15, 16384) == Fraction(2, 3)
    assert checked > 100


def test_bounds_report():
    report = bounds_report(1 << 16, 1 << 15, "1/6")
    assert report.min_queries == 16384
    assert report.delta == Fraction(1, 6)


# ─── Guessing ─────────────────────────────────────────────────────────────────

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_unseen_guess_success_exhaustive(n, rng):
    N = 1 << n
    for K in range(1, N):
        spec = SubsetSpec.random(n, K, rng)
        for q in range(0, K + 1):
            seen = spec.elements[:q]
            guesses = [guess_outside(seen, n, FixedRng(r)) for r in range(N - q)]
            assert sorted(guesses) == sorted(set(range(N)) - set(seen))
            wins = sum(g not in spec.elements for g in guesses)
            assert Fraction(wins, N - q) == random_guess_success(N, K, q)


def test_unseen_guess_quarter_example():
    assert random_guess_success(8, 4, 2) == Fraction(2, 3)
    assert single_sample_guess_success(16, 8) == Fraction(8, 15)


def test_guess_outside_requires_room():
    with pytest.raises(ParameterRangeError):
        guess_outside(range(4), 2, np.random.default_rng(0))


def test_player_never_returns_a_seen_string(rng):
    spec = SubsetSpec.random(5, 20, rng)
    for _ in range(200):
        oracle = IndexOracle(spec)
        guess = random_guess_player(oracle, 6, rng)
        assert guess not in spec.elements[:6]
        assert oracle.query_count == 6


def _player_rate(trials, rng):
    spec = SubsetSpec.random(10, 512, rng)
    wins = sum(
        random_guess_player(IndexOracle(spec), 10, rng) not in spec.elements
        for _ in range(trials)
    )
    return wins / trials


def test_player_monte_carlo(rng):
    assert within_sigmas(_player_rate(5_000, rng), 512 / 1014, 5_000)


@pytest.mark.slow
def test_player_monte_carlo_full_scale(rng):
    assert within_sigmas(_player_rate(100_000, rng), 512 / 1014, 100_000)


def test_index_oracle_is_one_based(rng):
    spec = SubsetSpec.first(3, 3)
    oracle = IndexOracle(spec)
    assert [oracle.query(i) for i in (1, 2, 3)] == [0, 1, 2]
    with pytest.raises(ParameterRangeError):
        oracle.query(0)
    with pytest.raises(ParameterRangeError):
        oracle.query(4)
    with pytest.raises(ParameterRangeError):
        random_guess_player(oracle, 4, rng)


# ─── Unique draws ─────────────────────────────────────────────────────────────

def test_stirling_row():
    assert stirling2_row(0) == (1,)
    assert stirling2_row(5) == (0, 1, 15, 25, 10, 1)
    with pytest.raises(ParameterRangeError):
        stirling2_row(-1)


def test_unique_draw_small_cases():
    assert unique_draw_distribution(2, 3).probabilities == {1: Fraction(2, 8), 2: Fraction(6, 8)}
    assert unique_draw_distribution(3, 2).probabilities == {1: Fraction(3, 9), 2: Fraction(6, 9)}
    assert unique_draw_distribution(1, 10).probabilities == {1: 1}


@pytest.mark.parametrize("K", range(1, 6))
def test_unique_draw_matches_enumeration(K):
    for d in range(1, 7):
        counts = {}
        for draws in product(range(K), repeat=d):
            q = len(set(draws))
            counts[q] = counts.get(q, 0) + 1
        expected = {q: Fraction(c, K**d) for q, c in counts.items()}
        assert unique_draw_distribution(K, d).probabilities == expected


def test_unique_draw_sums_to_one():
    for K in range(1, 13):
        for d in range(1, 13):
            dist = unique_draw_distribution(K, d)
            assert sum(dist.probabilities.values()) == 1
            assert max(dist.probabilities) == min(K, d)


def test_unique_draw_limits():
    with pytest.raises(ParameterRangeError):
        unique_draw_distribution(0, 3)
    with pytest.raises(ScaleError):
        unique_draw_distribution(4, 257)


def test_sample_complexity_success():
    assert sample_complexity_success(16, 8, 1) == Fraction(8, 15)
    assert sample_complexity_success(4, 1, 5) == Fraction(3, 3)
    two_draws = Fraction(1, 8) * Fraction(8, 15) + Fraction(7, 8) * Fraction(8, 14)
    assert sample_complexity_success(16, 8, 2) == two_draws


def test_draw_then_guess_small_case(rng):
    assert sample_complexity_success(8, 4, 3) == Fraction(199, 280)
    spec = SubsetSpec.random(3, 4, rng)
    trials = 20_000
    assert within_sigmas(draw_then_guess_rate(spec, 3, trials, rng), 199 / 280, trials)


def test_draw_then_guess_rate(rng):
    spec = SubsetSpec.random(6, 32, rng)
    trials = 5_000
    rate = draw_then_guess_rate(spec, 8, trials, rng)
    assert within_sigmas(rate, float(sample_complexity_success(64, 32, 8)), trials)


def test_draw_then_guess_needs_draws(rng):
    with pytest.raises(ParameterRangeError):
        draw_then_guess_rate(SubsetSpec.first(3, 4), 0, 10, rng)


# ─── Exhaustive checks ────────────────────────────────────────────────────────

def test_bayes_posterior_is_uniform():
    summary = bayes_uniformity_check(6, 3, [2])
    assert summary.uniform
    assert summary.expected == Fraction(1, 10)
    assert len(summary.complements) == 10
    assert all(2 not in c for c in summary.complements)


@pytest.mark.parametrize("N, K, observed", [(8, 4, []), (8, 4, [0, 5]), (10, 7, [1, 2, 3, 9])])
def test_bayes_uniform_across_cases(N, K, observed):
    summary = bayes_uniformity_check(N, K, observed)
    assert summary.uniform
    assert sum(summary.probabilities) == 1
    assert len(summary.complements) == math.comb(N - len(observed), N - K)


def test_bayes_limits():
    with pytest.raises(ScaleError):
        bayes_uniformity_check(17, 8, [])
    with pytest.raises(ParameterRangeError):
        bayes_uniformity_check(6, 2, [0, 1, 2])


@pytest.mark.parametrize("N, K", [(4, 2), (5, 2), (6, 3)])
def test_permutation_images_are_uniform(N, K):
    counts = permutation_image_counts(N, range(K))
    assert len(counts) == math.comb(N, K)
    assert set(counts.values()) == {math.factorial(K) * math.factorial(N - K)}


def test_permutation_image_limit():
    with pytest.raises(ScaleError):
        permutation_image_counts(9, [0])


# ─── Worst-case to average-case ───────────────────────────────────────────────

def test_reduction_averages_a_fixed_guess(rng):
    def always_zero(oracle, player_rng):
        return 0

    spec = SubsetSpec.first(4, 4)
    reduced = average_case_reduction(always_zero, rng)
    trials = 4_000
    wins = sum(reduced(IndexOracle(spec), rng) not in spec.elements for _ in range(trials))
    assert within_sigmas(wins / trials, 12 / 16, trials)


def test_reduction_preserves_correct_answers(rng):
    def query_then_guess(oracle, player_rng):
        return random_guess_player(oracle, oracle.K, player_rng)

    spec = SubsetSpec.random(4, 10, rng)
    reduced = average_case_reduction(query_then_guess, rng)
    for _ in range(100):
        oracle = IndexOracle(spec)
        assert reduced(oracle, rng) not in spec.elements
        assert oracle.query_count == 10
