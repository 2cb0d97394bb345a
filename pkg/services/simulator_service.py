"""
Complement Sampling Lab - Statevector Simulator

Only the gates and measurements the swapper circuits need. Every operation
is pure: the input StateVector is left untouched and a new one is returned.
Qubit 0 is the most significant bit of a basis index (see models.state).
"""

from typing import Iterable, Sequence, Tuple

import numpy as np

from config import MAX_SIM_QUBITS
from models.errors import (
    DegenerateBranchError, DimensionMismatchError, ParameterRangeError,
    QubitIndexError, ScaleError,
)
from models.state import MeasurementOutcome, StateVector

_INV_SQRT2 = 1.0 / np.sqrt(2.0)

DEGENERATE_MASS = 1e-15
COLLAPSED_MASS  = 1e-12


def check_scale(n_qubits: int) -> None:
    if n_qubits > MAX_SIM_QUBITS:
        raise ScaleError(f"{n_qubits} qubits exceed the simulator limit of {MAX_SIM_QUBITS}")


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.n_qubits:
        raise QubitIndexError(f"qubit {qubit} outside a {state.n_qubits}-qubit register")


def _split(amps: np.ndarray, qubit: int) -> np.ndarray:
    """View with axes (higher qubits, this qubit, lower qubits)."""
    return amps.reshape(1 << qubit, 2, -1)


def _bit_of(indices: np.ndarray, n_qubits: int, qubit: int) -> np.ndarray:
    return (indices >> (n_qubits - 1 - qubit)) & 1


# ─── Single-qubit gates ───────────────────────────────────────────────────────

def apply_single_qubit(state: StateVector, qubit: int, matrix: np.ndarray) -> StateVector:
    _check_qubit(state, qubit)
    out = np.einsum("ij,ajb->aib", matrix, _split(state.amplitudes, qubit))
    return StateVector(state.n_qubits, out.reshape(-1))


def apply_hadamard(state: StateVector, qubits: Iterable[int]) -> StateVector:
    """H on each listed qubit."""
    amps = state.amplitudes.copy()
    for qubit in qubits:
        _check_qubit(state, qubit)
        view = _split(amps, qubit)
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :]
        view[:, 0, :] = (a0 + a1) * _INV_SQRT2
        view[:, 1, :] = (a0 - a1) * _INV_SQRT2
    return StateVector(state.n_qubits, amps)


def apply_hadamard_all(state: StateVector) -> StateVector:
    return apply_hadamard(state, range(state.n_qubits))


def w_matrix(q_w: float, adjoint: bool = False) -> np.ndarray:
    """W(q) = exp(i arccos(sqrt q) Y), a real rotation."""
    if not 0.0 <= q_w <= 1.0:
        raise ParameterRangeError(f"W(q) needs 0 <= q <= 1, got {q_w}")
    c, s = np.sqrt(q_w), np.sqrt(1.0 - q_w)
    matrix = np.array([[c, -s], [s, c]], dtype=np.complex128)
    return matrix.T if adjoint else matrix


def apply_w_gate(state: StateVector, qubit: int, q_w: float, adjoint: bool = False) -> StateVector:
    return apply_single_qubit(state, qubit, w_matrix(q_w, adjoint))


def apply_z(state: StateVector, qubit: int) -> StateVector:
    _check_qubit(state, qubit)
    amps = state.amplitudes.copy()
    _split(amps, qubit)[:, 1, :] *= -1
    return StateVector(state.n_qubits, amps)


def apply_global_phase(state: StateVector, phase: complex) -> StateVector:
    if abs(abs(phase) - 1.0) > 1e-12:
        raise ParameterRangeError(f"a global phase must have modulus 1, got {phase!r}")
    return StateVector(state.n_qubits, state.amplitudes * phase)


# ─── Multi-qubit gates ────────────────────────────────────────────────────────

def apply_diffusion(state: StateVector) -> StateVector:
    """(2|+^n><+^n| - I)|psi> = 2 mean(psi) - psi, in O(2^n)."""
    amps = state.amplitudes
    return StateVector(state.n_qubits, 2.0 * amps.mean() - amps)


def apply_controlled_diffusion(state: StateVector, control: int, control_value: int) -> StateVector:
    """Diffusion on every other qubit, on the branch where `control` reads `control_value`."""
    _check_qubit(state, control)
    if state.n_qubits < 2:
        raise QubitIndexError("controlled diffusion needs a non-empty target register")
    if control_value not in (0, 1):
        raise ParameterRangeError(f"control value must be a bit, got {control_value}")
    amps = state.amplitudes.copy()
    view = _split(amps, control)
    branch = view[:, control_value, :]
    view[:, control_value, :] = 2.0 * branch.mean() - branch
    return StateVector(state.n_qubits, amps)


def apply_multi_controlled_not(
    state: StateVector,
    target: int,
    controls: Sequence[Tuple[int, int]] = (),
) -> StateVector:
    """Flip `target` on basis states where every (qubit, bit) control matches."""
    _check_qubit(state, target)
    seen = {target}
    for qubit, bit in controls:
        _check_qubit(state, qubit)
        if qubit in seen:
            raise QubitIndexError(f"qubit {qubit} used twice")
        if bit not in (0, 1):
            raise ParameterRangeError(f"control bit must be 0 or 1, got {bit}")
        seen.add(qubit)

    n = state.n_qubits
    indices = np.arange(1 << n)
    matches = np.ones(1 << n, dtype=bool)
    for qubit, bit in controls:
        matches &= _bit_of(indices, n, qubit) == bit

    flip = 1 << (n - 1 - target)
    low = indices[matches & (_bit_of(indices, n, target) == 0)]
    amps = state.amplitudes.copy()
    amps[low], amps[low | flip] = amps[low | flip], amps[low].copy()
    return StateVector(n, amps)


# ─── Register management ──────────────────────────────────────────────────────

def append_zero_qubit(state: StateVector) -> StateVector:
    """
    Tensor a |0> ancilla on as the new highest-index qubit. The limit applies
    to the data register, so a full-size register still gets its flag qubit.
    """
    check_scale(state.n_qubits)
    return StateVector(state.n_qubits + 1, np.kron(state.amplitudes, [1.0, 0.0]))


def remove_qubit(state: StateVector, qubit: int) -> StateVector:
    """Drop a qubit that sits in a definite basis state (e.g. after measuring it)."""
    _check_qubit(state, qubit)
    if state.n_qubits < 2:
        raise QubitIndexError("cannot remove the only qubit of a register")
    p1 = branch_probability(state, qubit, 1)
    value = int(p1 > 0.5)
    if min(p1, 1.0 - p1) > COLLAPSED_MASS:
        raise ParameterRangeError(f"qubit {qubit} is not in a definite state (p1 = {p1:.3g})")
    rest = _split(state.amplitudes, qubit)[:, value, :].reshape(-1)
    return StateVector(state.n_qubits - 1, rest / np.linalg.norm(rest))


# ─── Measurement ──────────────────────────────────────────────────────────────

def branch_probability(state: StateVector, qubit: int, value: int) -> float:
    _check_qubit(state, qubit)
    branch = _split(state.amplitudes, qubit)[:, value, :]
    return float(np.sum(np.abs(branch) ** 2))


def measure_qubit(state: StateVector, qubit: int, rng: np.random.Generator) -> MeasurementOutcome:
    p0 = branch_probability(state, qubit, 0)
    p1 = branch_probability(state, qubit, 1)
    outcome = int(rng.random() * (p0 + p1) >= p0)
    probability = p1 if outcome else p0
    if probability < DEGENERATE_MASS:
        raise DegenerateBranchError(f"sampled branch {outcome} of qubit {qubit} has mass {probability:.3g}")

    amps = state.amplitudes.copy()
    _split(amps, qubit)[:, 1 - outcome, :] = 0.0
    post = StateVector(state.n_qubits, amps / np.sqrt(probability))
    return MeasurementOutcome(bitstring=outcome, probability=probability, post_state=post)


def exact_distribution(state: StateVector) -> np.ndarray:
    """Born probabilities of all 2^n basis states."""
    return state.probabilities()


def measure_all(state: StateVector, rng: np.random.Generator) -> int:
    probs = state.probabilities()
    return int(rng.choice(state.dim, p=probs / probs.sum()))


def sample_counts(state: StateVector, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Outcome histogram of `shots` independent computational-basis measurements."""
    probs = state.probabilities()
    return rng.multinomial(shots, probs / probs.sum())


def inner_product(a: StateVector, b: StateVector) -> complex:
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatchError(f"{a.n_qubits}-qubit vs {b.n_qubits}-qubit state")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|."""
    return abs(inner_product(a, b))
