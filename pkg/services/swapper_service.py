"""
Complement Sampling Lab - Swappers

Quantum algorithms that turn one copy of |S> into a sample outside S:
the diffusion (complement) swapper, the flagged zero-error swapper, the
Deutsch-Jozsa distinguisher and the distinguisher <-> swapper constructions,
plus the quantum coupon collector baseline and the four success curves.

Inputs are promised to be |S> for the given spec; the promise is not checked.
"""

import logging
from fractions import Fraction
from typing import Callable, Collection, List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_SEED
from models.errors import DimensionMismatchError, ParameterRangeError
from models.schemas import CurveRow, Curve, SubsetSpec, ZeroErrorConfig
from models.state import StateVector, SwapAttempt
from services.seeding import derive_rng
from services.simulator_service import (
    DEGENERATE_MASS, append_zero_qubit, apply_controlled_diffusion, apply_diffusion,
    apply_hadamard, apply_hadamard_all, apply_multi_controlled_not, apply_w_gate, apply_z,
    branch_probability, check_scale, inner_product, measure_all, measure_qubit,
    remove_qubit, sample_counts,
)
from services.subset_service import (
    complement_mass, hardest_instance_overlap, make_subset_state,
)

logger = logging.getLogger(__name__)


def _check_register(state: StateVector, spec: SubsetSpec) -> None:
    if state.n_qubits != spec.n:
        raise DimensionMismatchError(f"{state.n_qubits}-qubit state vs subset of {{0,1}}^{spec.n}")


# ─── Complement swapper ───────────────────────────────────────────────────────

def complement_swap(state: StateVector, spec: SubsetSpec) -> Tuple[StateVector, float]:
    """U|S> and the predicted complement mass 4 (K/N)(1 - K/N) = 1 - 4 beta^2."""
    _check_register(state, spec)
    p = Fraction(spec.K, spec.N)
    return apply_diffusion(state), float(4 * p * (1 - p))


# ─── Zero-error swapper ───────────────────────────────────────────────────────

def zero_error_config(K: int, N: int) -> ZeroErrorConfig:
    """b = 0, q = 1/(2(1 - K/N)) below half; b = 1, q = N/(2K) from half upwards."""
    if not 1 <= K <= N - 1:
        raise ParameterRangeError(f"need 1 <= K <= N-1, got K={K}, N={N}")
    if 2 * K < N:
        return ZeroErrorConfig(b=0, q_w=float(Fraction(N, 2 * (N - K))))
    return ZeroErrorConfig(b=1, q_w=float(Fraction(N, 2 * K)))


def zero_error_success_probability(K: int, N: int) -> Fraction:
    return Fraction(min(K, N - K), max(K, N - K))


def flagged_circuit(state: StateVector, K: int) -> StateVector:
    """
    Pre-measurement state of the flagged circuit on |S>|0> for any S of size K:
    W(q), diffusion controlled on the ancilla reading 0, Z^b, W(q)^dagger.
    The ancilla is the highest-index qubit.
    """
    cfg = zero_error_config(K, state.dim)
    ancilla = state.n_qubits
    joint = append_zero_qubit(state)
    joint = apply_w_gate(joint, ancilla, cfg.q_w)
    joint = apply_controlled_diffusion(joint, control=ancilla, control_value=0)
    if cfg.b:
        joint = apply_z(joint, ancilla)
    return apply_w_gate(joint, ancilla, cfg.q_w, adjoint=True)


def flagged_swap(state: StateVector, K: int, rng: np.random.Generator) -> SwapAttempt:
    """One zero-error attempt; needs only the public cardinality K, not S itself."""
    joint = flagged_circuit(state, K)
    ancilla = state.n_qubits
    success_probability = branch_probability(joint, ancilla, 0)
    flag = measure_qubit(joint, ancilla, rng)
    post = remove_qubit(flag.post_state, ancilla)
    sample = measure_all(post, rng) if flag.bitstring == 0 else None
    return SwapAttempt(
        flag=flag.bitstring,
        sample=sample,
        post_state=post,
        success_probability=success_probability,
    )


def repeated_flagged_swap(
    copies: Sequence[StateVector],
    K: int,
    rng: np.random.Generator,
) -> SwapAttempt:
    """Run the zero-error swapper copy by copy until a flag reads 0."""
    if not copies:
        raise ParameterRangeError("need at least one copy of |S>")
    overall = float(repeated_success_probability(K, copies[0].dim, len(copies)))
    for attempts, copy in enumerate(copies, start=1):
        result = flagged_swap(copy, K, rng)
        if result.flag == 0:
            break
    return SwapAttempt(
        flag=result.flag,
        sample=result.sample,
        post_state=result.post_state,
        success_probability=overall,
        attempts=attempts,
    )


def zero_error_circuit(state: StateVector, spec: SubsetSpec) -> StateVector:
    _check_register(state, spec)
    return flagged_circuit(state, spec.K)


def zero_error_joint_distribution(state: StateVector, spec: SubsetSpec) -> np.ndarray:
    """P[register = x, flag = f] as an (N, 2) table."""
    return zero_error_circuit(state, spec).probabilities().reshape(spec.N, 2)


def zero_error_swap(state: StateVector, spec: SubsetSpec, rng: np.random.Generator) -> SwapAttempt:
    _check_register(state, spec)
    return flagged_swap(state, spec.K, rng)


def repeated_success_probability(K: int, N: int, k: int) -> Fraction:
    """1 - (1 - p)^k for k sequential zero-error attempts."""
    return 1 - (1 - zero_error_success_probability(K, N)) ** k


def repeated_zero_error_swap(
    copies: Sequence[StateVector],
    spec: SubsetSpec,
    rng: np.random.Generator,
) -> SwapAttempt:
    for copy in copies:
        _check_register(copy, spec)
    return repeated_flagged_swap(copies, spec.K, rng)


def zero_error_optimality_bound(K: int, N: int) -> Fraction:
    """
    Upper bound for any single-flag zero-error swapper: unitaries preserve
    |<S1|S2>| on the hardest pair, and only the failure branch can carry it.
    """
    return 1 - hardest_instance_overlap(K, N)


def multi_copy_success_bound(K: int, N: int, k: int) -> Fraction:
    """1 - ((2K - N)/K)^k; holds for K >= N/2 even with joint measurements."""
    if 2 * K < N:
        raise ParameterRangeError(f"the multi-copy bound needs K >= N/2, got K={K}, N={N}")
    return 1 - hardest_instance_overlap(K, N) ** k


# ─── Distinguishers ───────────────────────────────────────────────────────────

def dj_acceptance_probability(state: StateVector) -> float:
    """Probability that the Deutsch-Jozsa measurement reports "balanced"."""
    return 1.0 - float(abs(apply_hadamard_all(state).amplitudes[0]) ** 2)


def dj_distinguish(state: StateVector, rng: Optional[np.random.Generator] = None) -> int:
    """
    0 for |y_con>, 1 for |y_bal>. With an rng the all-zero test is sampled;
    without one the more likely outcome is returned (exact on the promise).
    """
    if rng is None:
        return int(dj_acceptance_probability(state) > 0.5)
    return int(measure_all(apply_hadamard_all(state), rng) != 0)


def distinguishing_bias(
    acceptance: Callable[[StateVector], float],
    a: StateVector,
    b: StateVector,
) -> float:
    """| ||Pi_1 C|a>||^2 - ||Pi_1 C|b>||^2 | for a circuit given by its acceptance probability."""
    return abs(acceptance(a) - acceptance(b))


def aas_swapper_from_distinguisher(state: StateVector) -> StateVector:
    """
    The Deutsch-Jozsa distinguisher plugged into the A, Z, A^dagger swapper and
    simplified: H on qubits 1..n-1, Z on qubit 0, NOT on qubit 0 controlled on
    the rest reading zero, Z on qubit 0, H again. Equals -U.
    """
    rest = range(1, state.n_qubits)
    out = apply_hadamard(state, rest)
    out = apply_z(out, 0)
    out = apply_multi_controlled_not(out, 0, [(q, 0) for q in rest])
    out = apply_z(out, 0)
    return apply_hadamard(out, rest)


def _aas_distinguisher_circuit(state: StateVector) -> StateVector:
    ancilla = state.n_qubits
    joint = apply_hadamard(append_zero_qubit(state), [ancilla])
    joint = apply_controlled_diffusion(joint, control=ancilla, control_value=1)
    return apply_hadamard(joint, [ancilla])


def aas_distinguisher_acceptance(state: StateVector) -> float:
    """Probability of reading 1 (the minus conjugate state) on the ancilla."""
    return branch_probability(_aas_distinguisher_circuit(state), state.n_qubits, 1)


def aas_distinguisher_from_swapper(state: StateVector, rng: np.random.Generator) -> int:
    """Ancilla H, swapper controlled on the ancilla, H, measure: 0 for phi+, 1 for phi-."""
    joint = _aas_distinguisher_circuit(state)
    return measure_qubit(joint, state.n_qubits, rng).bitstring


# ─── Quantum coupon collector ─────────────────────────────────────────────────

def coupon_collector_branches(state: StateVector) -> List[Tuple[float, StateVector]]:
    """Outcomes of the {|+^n><+^n|, I - |+^n><+^n|} measurement with their post-states."""
    plus = StateVector.uniform_state(state.n_qubits)
    overlap = inner_product(plus, state)
    p_plus = abs(overlap) ** 2
    residual = state.amplitudes - overlap * plus.amplitudes
    p_rest = float(np.vdot(residual, residual).real)

    branches = []
    if p_plus > DEGENERATE_MASS:
        branches.append((p_plus, StateVector(state.n_qubits, plus.amplitudes * overlap / abs(overlap))))
    if p_rest > DEGENERATE_MASS:
        branches.append((p_rest, StateVector(state.n_qubits, residual / np.sqrt(p_rest))))
    return branches


def coupon_collector_hit_probability(state: StateVector, spec: SubsetSpec) -> float:
    return sum(p * complement_mass(post, spec) for p, post in coupon_collector_branches(state))


def coupon_collector_sample(state: StateVector, rng: np.random.Generator) -> int:
    branches = coupon_collector_branches(state)
    weights = np.array([p for p, _ in branches])
    choice = rng.choice(len(branches), p=weights / weights.sum())
    return measure_all(branches[choice][1], rng)


# ─── Success curves ───────────────────────────────────────────────────────────

def admissible_betas(N: int) -> List[Fraction]:
    return [Fraction(K, N) - Fraction(1, 2) for K in range(1, N)]


def beta_to_cardinality(beta, N: int) -> int:
    """K = N (1/2 + beta), required to be an integer in [1, N-1]."""
    exact = N * (Fraction(1, 2) + Fraction(beta))
    K = round(exact)
    if abs(exact - K) > Fraction(1, 10**9) * N or not 1 <= K <= N - 1:
        if N <= 64:
            choices = ", ".join(str(b) for b in admissible_betas(N))
        else:
            choices = f"k/{N} - 1/2 for k = 1..{N - 1}"
        raise ParameterRangeError(f"beta={beta} gives non-integral or boundary K for N={N}; admissible: {choices}")
    return K


def analytic_curves(K: int, N: int) -> dict:
    p = Fraction(K, N)
    return {
        Curve.COMPLEMENT_SWAPPER: 4 * p * (1 - p),
        Curve.ZERO_ERROR_SWAPPER: zero_error_success_probability(K, N),
        Curve.COUPON_COLLECTOR:   2 * p * (1 - p),
        Curve.CLASSICAL_GUESS:    Fraction(N - K, N - 1),
    }


def _simulate_curve(curve: Curve, spec: SubsetSpec, trials: int, rng: np.random.Generator) -> float:
    outside = ~spec.member_mask()
    state = make_subset_state(spec)

    if curve is Curve.COMPLEMENT_SWAPPER:
        swapped, _ = complement_swap(state, spec)
        hits = sample_counts(swapped, trials, rng)[outside].sum()
    elif curve is Curve.ZERO_ERROR_SWAPPER:
        joint = zero_error_joint_distribution(state, spec).ravel()
        counts = rng.multinomial(trials, joint / joint.sum()).reshape(spec.N, 2)
        hits = counts[outside, 0].sum()
    elif curve is Curve.COUPON_COLLECTOR:
        mixture = sum(p * post.probabilities() for p, post in coupon_collector_branches(state))
        hits = rng.multinomial(trials, mixture / mixture.sum())[outside].sum()
    else:
        # one classical sample, then a uniform guess among the other N - 1 strings
        seen = spec.element_array()[rng.integers(spec.K, size=trials)]
        guess = rng.integers(spec.N - 1, size=trials)
        guess += guess >= seen
        hits = np.count_nonzero(outside[guess])
    return float(hits) / trials


def success_curves(
    beta_grid: Sequence,
    N: int,
    trials: int = 0,
    seed: int = DEFAULT_SEED,
    simulate: Collection[Curve] = tuple(Curve),
) -> List[CurveRow]:
    """
    Analytic success probability of the four strategies per beta, plus Monte
    Carlo estimates from the simulated circuits when `trials` > 0.
    """
    n = N.bit_length() - 1
    if N < 2 or 1 << n != N:
        raise ParameterRangeError(f"N must be a power of two, got {N}")
    if trials:
        check_scale(n)

    rows = []
    for beta in beta_grid:
        K = beta_to_cardinality(beta, N)
        analytic = analytic_curves(K, N)
        simulated = {}
        if trials:
            rng = derive_rng(seed, K)
            spec = SubsetSpec.random(n, K, rng)
            simulated = {c: _simulate_curve(c, spec, trials, rng) for c in Curve if c in simulate}
        rows.append(CurveRow(
            beta=float(Fraction(K, N) - Fraction(1, 2)),
            K=K,
            **{f"analytic_{c.value}": float(v) for c, v in analytic.items()},
            **{f"simulated_{c.value}": v for c, v in simulated.items()},
            trials=trials,
            seed=seed,
        ))
    logger.debug("computed %d curve rows for N=%d", len(rows), N)
    return rows
