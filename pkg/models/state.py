"""
Complement Sampling Lab - Quantum state carriers

Qubit ordering: qubit 0 is the most significant bit of a basis-state index,
so for n=3 the string |100> is index 4. Every service uses this convention.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from models.errors import DimensionMismatchError, ParameterRangeError

# Composed circuits accumulate rounding over up to 2^16+ amplitudes.
NORM_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalised dense amplitude array over `n_qubits` qubits (read-only)."""

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ParameterRangeError(f"n_qubits must be >= 1, got {self.n_qubits}")
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 1 << self.n_qubits:
            raise DimensionMismatchError(
                f"{amps.shape[0]} amplitudes do not fit {self.n_qubits} qubits"
            )
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > NORM_ATOL:
            raise ParameterRangeError(f"state is not normalised (|psi|^2 = {norm_sq!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    # ── Constructors ──────────────────────────────────────────────────────────

    @classmethod
    def basis_state(cls, n_qubits: int, index: int = 0) -> "StateVector":
        if not 0 <= index < 1 << n_qubits:
            raise ParameterRangeError(f"basis index {index} outside {n_qubits}-qubit register")
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def zero_state(cls, n_qubits: int) -> "StateVector":
        return cls.basis_state(n_qubits, 0)

    @classmethod
    def uniform_state(cls, n_qubits: int) -> "StateVector":
        """|+^n>."""
        dim = 1 << n_qubits
        return cls(n_qubits, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        dim = amps.shape[0]
        n_qubits = dim.bit_length() - 1
        if dim < 2 or 1 << n_qubits != dim:
            raise DimensionMismatchError(f"length {dim} is not a power of two >= 2")
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ParameterRangeError("cannot normalise the zero vector")
            amps = amps / norm
        return cls(n_qubits, amps)

    @classmethod
    def random_state(cls, n_qubits: int, rng: np.random.Generator) -> "StateVector":
        """Haar-like random state from complex Gaussian amplitudes."""
        dim = 1 << n_qubits
        amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        return cls.from_amplitudes(amps, normalize=True)

    # ── Accessors ─────────────────────────────────────────────────────────────

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    bitstring: int
    probability: float
    post_state: Optional[StateVector] = None


@dataclass(frozen=True, eq=False)
class SwapAttempt:
    """
    Result of a flagged swap. flag 0 means success: `post_state` is the
    complement state and `sample` a computational-basis draw from it.
    `success_probability` is the exact flag-0 mass before measurement
    (for repeated attempts, the overall probability over all copies).
    """

    flag: int
    sample: Optional[int]
    post_state: StateVector
    success_probability: float
    attempts: int = 1
