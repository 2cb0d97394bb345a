"""
Complement Sampling Lab - Subset, Complement and Phase States
"""

from fractions import Fraction
from typing import Tuple, Union

import numpy as np

from models.errors import DimensionMismatchError, ParameterRangeError
from models.schemas import BalancedFunctionSpec, ConstantFunctionSpec, SubsetSpec
from models.state import StateVector
from services.simulator_service import check_scale

BooleanFunction = Union[BalancedFunctionSpec, ConstantFunctionSpec]


def _uniform_on(mask: np.ndarray, n: int) -> StateVector:
    amps = np.zeros(mask.shape[0], dtype=np.complex128)
    amps[mask] = 1.0 / np.sqrt(np.count_nonzero(mask))
    return StateVector(n, amps)


def make_subset_state(spec: SubsetSpec) -> StateVector:
    """|S> = K^(-1/2) sum_{x in S} |x>."""
    check_scale(spec.n)
    return _uniform_on(spec.member_mask(), spec.n)


def make_complement_state(spec: SubsetSpec) -> StateVector:
    """|S_bar> = (N-K)^(-1/2) sum_{x not in S} |x>."""
    check_scale(spec.n)
    return _uniform_on(~spec.member_mask(), spec.n)


def make_phase_state(f: BooleanFunction) -> StateVector:
    """|y_f> = N^(-1/2) sum_x (-1)^f(x) |x>."""
    check_scale(f.n)
    signs = 1.0 - 2.0 * f.values()
    return StateVector(f.n, signs / np.sqrt(signs.shape[0]))


def conjugate_states(spec: SubsetSpec) -> Tuple[StateVector, StateVector]:
    """(|S> + |S_bar>)/sqrt2 and (|S> - |S_bar>)/sqrt2."""
    s = make_subset_state(spec).amplitudes
    s_bar = make_complement_state(spec).amplitudes
    return (
        StateVector(spec.n, (s + s_bar) / np.sqrt(2.0)),
        StateVector(spec.n, (s - s_bar) / np.sqrt(2.0)),
    )


def complement_mass(state: StateVector, spec: SubsetSpec) -> float:
    """Probability that a computational-basis measurement lands outside S."""
    if state.n_qubits != spec.n:
        raise DimensionMismatchError(f"{state.n_qubits}-qubit state vs subset of {{0,1}}^{spec.n}")
    return float(np.sum(state.probabilities()[~spec.member_mask()]))


# ─── Closed-form overlaps ─────────────────────────────────────────────────────

def phase_state_overlap(f: BooleanFunction, g: BooleanFunction) -> float:
    """|<y_f|y_g>| = |2 I_fg - N| / N with I_fg = #{x : f(x) = g(x)}."""
    if f.n != g.n:
        raise DimensionMismatchError(f"functions on {f.n} and {g.n} bits")
    N = 1 << f.n
    agree = int(np.count_nonzero(f.values() == g.values()))
    return abs(2 * agree - N) / N


def _check_cardinality(K: int, N: int) -> None:
    if not 1 <= K <= N - 1:
        raise ParameterRangeError(f"need 1 <= K <= N-1, got K={K}, N={N}")


def conjugate_pair_overlap(K: int, N: int, x_intersection: int) -> float:
    """
    |<phi+_1|phi-_2>|^2 for two K-subsets with |S1 n S2| = x:
    (1/4) ((2K - N)(K - x) / (K (N - K)))^2.
    """
    _check_cardinality(K, N)
    if not max(0, 2 * K - N) <= x_intersection <= K:
        raise ParameterRangeError(
            f"|S1 n S2| = {x_intersection} impossible for K={K}, N={N} "
            f"(valid: {max(0, 2 * K - N)}..{K})"
        )
    ratio = Fraction((2 * K - N) * (K - x_intersection), K * (N - K))
    return float(ratio * ratio / 4)


def max_conjugate_overlap(K: int, N: int) -> float:
    """Largest conjugate-pair overlap over all admissible intersections."""
    _check_cardinality(K, N)
    if 2 * K <= N:
        ratio = Fraction(N - 2 * K, K - N)
    else:
        ratio = 2 - Fraction(N, K)
    return float(ratio * ratio / 4)


# ─── Hardest instances for zero-error swapping ────────────────────────────────

def hardest_instance_pair(K: int, N: int) -> Tuple[SubsetSpec, SubsetSpec]:
    """S1 = first K strings, S2 = last K strings."""
    n = N.bit_length() - 1
    if N < 2 or 1 << n != N:
        raise ParameterRangeError(f"N must be a power of two, got {N}")
    _check_cardinality(K, N)
    return SubsetSpec.first(n, K), SubsetSpec.last(n, K)


def hardest_instance_overlap(K: int, N: int) -> Fraction:
    """
    <S1|S2> when K >= N/2 (the complements are disjoint), otherwise
    <S1_bar|S2_bar> (the subsets are disjoint), for the hardest pair.
    """
    _check_cardinality(K, N)
    if 2 * K >= N:
        return Fraction(max(0, 2 * K - N), K)
    return Fraction(max(0, N - 2 * K), N - K)
