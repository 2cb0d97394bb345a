"""
Complement Sampling Lab - Classical Baselines & Bounds

Everything combinatorial is computed in exact integers / Fractions; floats
appear only where a caller converts the final value.
"""

import math
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Dict, Iterable, Tuple, Union

import numpy as np

from models.errors import ParameterRangeError, ScaleError
from models.schemas import BayesSummary, BoundsReport, SubsetSpec, UniqueDrawDistribution

MAX_DRAWS         = 256
MAX_DRAW_SUPPORT  = 10**6
MAX_BAYES_N       = 16
MAX_IMAGE_COUNT_N = 8
MAX_REDUCTION_BITS = 20

Rational = Union[Fraction, int, float, str]


# ─── Index oracle ─────────────────────────────────────────────────────────────

class IndexOracle:
    """O_index(i) = i-th element of the hidden subset (1-based), with a query counter."""

    def __init__(self, spec: SubsetSpec):
        self._spec = spec
        self.query_count = 0

    @property
    def n(self) -> int:
        return self._spec.n

    @property
    def N(self) -> int:
        return self._spec.N

    @property
    def K(self) -> int:
        return self._spec.K

    def query(self, i: int) -> int:
        if not 1 <= i <= self.K:
            raise ParameterRangeError(f"index {i} outside 1..{self.K}")
        self.query_count += 1
        return self._spec.elements[i - 1]


class RelabeledIndexOracle(IndexOracle):
    """
    Oracle for sigma(S) under a shuffled ordering:
    query(i) = sigma(inner.query(order[i-1] + 1)).
    """

    def __init__(self, inner: IndexOracle, sigma: np.ndarray, order: np.ndarray):
        self._inner = inner
        self._sigma = sigma
        self._order = order

    @property
    def n(self) -> int:
        return self._inner.n

    @property
    def N(self) -> int:
        return self._inner.N

    @property
    def K(self) -> int:
        return self._inner.K

    @property
    def query_count(self) -> int:
        return self._inner.query_count

    def query(self, i: int) -> int:
        if not 1 <= i <= self.K:
            raise ParameterRangeError(f"index {i} outside 1..{self.K}")
        return int(self._sigma[self._inner.query(int(self._order[i - 1]) + 1)])


Player = Callable[[IndexOracle, np.random.Generator], int]


# ─── Guessing strategies ──────────────────────────────────────────────────────

def guess_outside(observed: Iterable[int], n: int, rng: np.random.Generator) -> int:
    """Uniform draw from the n-bit strings not in `observed`."""
    N = 1 << n
    seen = np.unique(np.fromiter((int(x) for x in observed), dtype=np.int64))
    if seen.shape[0] >= N:
        raise ParameterRangeError("every string has been observed; nothing left to guess")
    guess = int(rng.integers(N - seen.shape[0]))
    # rank among unseen strings -> value
    for value in seen:
        if value > guess:
            break
        guess += 1
    return guess


def random_guess_player(oracle: IndexOracle, q_budget: int, rng: np.random.Generator) -> int:
    """Query O_index(1..q), then guess uniformly among the N - q unseen strings."""
    if not 0 <= q_budget <= oracle.K:
        raise ParameterRangeError(f"query budget {q_budget} outside 0..K={oracle.K}")
    seen = [oracle.query(i) for i in range(1, q_budget + 1)]
    return guess_outside(seen, oracle.n, rng)


def random_guess_success(N: int, K: int, q: int) -> Fraction:
    """(N - K)/(N - q): success of the unseen-string guess after q distinct elements."""
    if not 1 <= K <= N - 1:
        raise ParameterRangeError(f"need 1 <= K <= N-1, got K={K}, N={N}")
    if not 0 <= q <= K:
        raise ParameterRangeError(f"q={q} outside 0..K={K}")
    return Fraction(N - K, N - q)


def single_sample_guess_success(N: int, K: int) -> Fraction:
    """One sample seen, guess among the other N - 1 strings."""
    return random_guess_success(N, K, 1)


# ─── Lower bound ──────────────────────────────────────────────────────────────

def _as_fraction(value: Rational) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def lower_bound_queries(N: int, K: int, delta: Rational) -> Fraction:
    """
    N - 2(N - K)/(2 delta + 1): index queries any classical algorithm needs to
    succeed with probability 1/2 + delta. May be negative (then zero suffice).
    """
    delta = _as_fraction(delta)
    if not 1 <= K <= N - 1:
        raise ParameterRangeError(f"need 1 <= K <= N-1, got K={K}, N={N}")
    if not 0 <= delta <= Fraction(1, 2):
        raise ParameterRangeError(f"delta must lie in [0, 1/2], got {delta}")
    return N - Fraction(2 * (N - K)) / (2 * delta + 1)


def bounds_report(N: int, K: int, delta: Rational) -> BoundsReport:
    delta = _as_fraction(delta)
    return BoundsReport(N=N, K=K, delta=delta, min_queries=lower_bound_queries(N, K, delta))


# ─── Unique draws ─────────────────────────────────────────────────────────────

@lru_cache(maxsize=None)
def stirling2_row(d: int) -> Tuple[int, ...]:
    """S2(d, 0..d) by S2(d, k) = k S2(d-1, k) + S2(d-1, k-1)."""
    if d < 0:
        raise ParameterRangeError(f"d must be >= 0, got {d}")
    if d == 0:
        return (1,)
    prev = stirling2_row(d - 1) + (0,)
    return tuple(k * prev[k] + (prev[k - 1] if k else 0) for k in range(d + 1))


def unique_draw_distribution(K: int, d: int) -> UniqueDrawDistribution:
    """P[q distinct] = K!/(K-q)! * S2(d, q) / K^d for q = 1..min(d, K)."""
    if K < 1 or d < 1:
        raise ParameterRangeError(f"need K >= 1 and d >= 1, got K={K}, d={d}")
    if d > MAX_DRAWS or K > MAX_DRAW_SUPPORT:
        raise ScaleError(f"unique-draw distribution limited to d <= {MAX_DRAWS}, K <= {MAX_DRAW_SUPPORT}")
    row = stirling2_row(d)
    total = K**d
    probabilities = {
        q: Fraction(math.perm(K, q) * row[q], total)
        for q in range(1, min(d, K) + 1)
    }
    return UniqueDrawDistribution(K=K, d=d, probabilities=probabilities)


def sample_complexity_success(N: int, K: int, d: int) -> Fraction:
    """Success of draw-d-samples-then-guess-unseen: sum_q P[q] (N - K)/(N - q)."""
    dist = unique_draw_distribution(K, d)
    return sum(
        (p * random_guess_success(N, K, q) for q, p in dist.probabilities.items()),
        start=Fraction(0),
    )


def draw_then_guess_rate(spec: SubsetSpec, d: int, trials: int, rng: np.random.Generator) -> float:
    """
    Play draw-then-guess against the fixed subset `spec`: d uniform draws with
    replacement, then `guess_outside` on what was seen. Fraction of wins.
    """
    if d < 1 or trials < 1:
        raise ParameterRangeError(f"need d >= 1 and trials >= 1, got d={d}, trials={trials}")
    elements = spec.element_array()
    members = spec.member_mask()
    draws = elements[rng.integers(spec.K, size=(trials, d))]
    wins = sum(not members[guess_outside(row, spec.n, rng)] for row in draws)
    return wins / trials


# ─── Exhaustive checks ────────────────────────────────────────────────────────

def bayes_uniformity_check(N: int, K: int, observed: Iterable[int]) -> BayesSummary:
    """
    Posterior over complements given the set Q of observed elements, by
    literal Bayes over every K-subset with a uniform prior and a uniformly
    random oracle ordering.
    """
    if N > MAX_BAYES_N:
        raise ScaleError(f"Bayes enumeration limited to N <= {MAX_BAYES_N}, got {N}")
    if not 1 <= K <= N - 1:
        raise ParameterRangeError(f"need 1 <= K <= N-1, got K={K}, N={N}")
    Q = frozenset(int(x) for x in observed)
    if len(Q) > K or any(not 0 <= x < N for x in Q):
        raise ParameterRangeError(f"observed set {sorted(Q)} is not a subset of size <= {K} of [0, {N})")

    prior = Fraction(1, math.comb(N, K))
    # P[first |Q| answers form Q | S] for S containing Q
    likelihood = Fraction(1, math.comb(K, len(Q)))

    universe = frozenset(range(N))
    complements, joint = [], []
    for subset in combinations(range(N), K):
        if Q <= set(subset):
            complements.append(tuple(sorted(universe.difference(subset))))
            joint.append(prior * likelihood)
    evidence = sum(joint)
    probabilities = tuple(j / evidence for j in joint)

    expected = Fraction(1, math.comb(N - len(Q), N - K))
    return BayesSummary(
        N=N,
        K=K,
        observed=tuple(sorted(Q)),
        complements=tuple(complements),
        probabilities=probabilities,
        expected=expected,
        uniform=len(complements) == math.comb(N - len(Q), N - K) and all(p == expected for p in probabilities),
    )


def permutation_image_counts(N: int, subset: Iterable[int]) -> Dict[Tuple[int, ...], int]:
    """How often each K-subset T arises as sigma(S) over all N! permutations sigma."""
    if N > MAX_IMAGE_COUNT_N:
        raise ScaleError(f"permutation enumeration limited to N <= {MAX_IMAGE_COUNT_N}, got {N}")
    subset = tuple(int(x) for x in subset)
    counts = Counter(
        tuple(sorted(sigma[x] for x in subset))
        for sigma in permutations(range(N))
    )
    return dict(counts)


# ─── Worst-case to average-case ───────────────────────────────────────────────

def average_case_reduction(player: Player, rng: np.random.Generator) -> Player:
    """
    Wrap `player` so it faces sigma(S) under a uniformly random relabeling
    sigma and a shuffled element order, then map its answer back with
    sigma^-1. The wrapped player's success on any fixed S equals the
    original player's average over uniformly random instances.
    """

    def reduced(oracle: IndexOracle, player_rng: np.random.Generator) -> int:
        if oracle.n > MAX_REDUCTION_BITS:
            raise ScaleError(f"explicit relabeling tables limited to n <= {MAX_REDUCTION_BITS}")
        sigma = rng.permutation(oracle.N)
        sigma_inv = np.empty_like(sigma)
        sigma_inv[sigma] = np.arange(oracle.N)
        order = rng.permutation(oracle.K)
        answer = player(RelabeledIndexOracle(oracle, sigma, order), player_rng)
        return int(sigma_inv[answer])

    return reduced
