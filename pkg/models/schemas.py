"""
Complement Sampling Lab - Data Models (Pydantic)
"""

from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple
import uuid

import numpy as np
from pydantic import (
    BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator,
)

from config import ARTIFACT_VERSION
from models.errors import ParameterRangeError


def hex_width(n_bits: int) -> int:
    return max(1, (n_bits + 3) // 4)


def to_hex(value: int, n_bits: int) -> str:
    return format(int(value), f"0{hex_width(n_bits)}x")


def parse_bits(value: Any) -> int:
    """Accept ints and hex strings (with or without 0x) for n-bit strings."""
    if isinstance(value, str):
        return int(value, 16)
    return int(value)


def parse_hex16(value: str) -> int:
    """A 16-bit word written as exactly four hex digits (optional 0x)."""
    digits = value.strip().lower().removeprefix("0x")
    if len(digits) != 4 or any(c not in "0123456789abcdef" for c in digits):
        raise ValueError(f"expected 4 hex digits, got {value!r}")
    return int(digits, 16)


# ─── Enums ────────────────────────────────────────────────────────────────────

class PlayerKind(str, Enum):
    QUANTUM_COMPLEMENT     = "quantum_complement"
    QUANTUM_ZERO_ERROR     = "quantum_zero_error"
    CLASSICAL_RANDOM_GUESS = "classical_random_guess"
    COUPON_COLLECTOR       = "coupon_collector"

    @property
    def is_quantum(self) -> bool:
        return self is not PlayerKind.CLASSICAL_RANDOM_GUESS


class Backend(str, Enum):
    SAES         = "saes"
    RANDOM_TABLE = "random_table"


class ClassicalAccess(str, Enum):
    SAMPLES = "samples"   # uniform draws with replacement
    INDEX   = "index"     # O_index(1..j), distinct elements


class Curve(str, Enum):
    COMPLEMENT_SWAPPER = "cs"
    ZERO_ERROR_SWAPPER = "ze"
    COUPON_COLLECTOR   = "cc"
    CLASSICAL_GUESS    = "cl"


class Direction(str, Enum):
    ENCRYPT = "encrypt"
    DECRYPT = "decrypt"


# ─── Subsets & Boolean Functions ──────────────────────────────────────────────

class SubsetSpec(BaseModel):
    """
    An ordered subset S of {0,1}^n. The element order is the order the index
    oracle reports; any fixed order is a valid "unknown ordering".
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, le=32)
    elements: Tuple[int, ...]

    @field_validator("elements", mode="before")
    @classmethod
    def _parse_elements(cls, value):
        return tuple(parse_bits(v) for v in value)

    @model_validator(mode="after")
    def _check_subset(self):
        N, K = 1 << self.n, len(self.elements)
        if not 1 <= K <= N - 1:
            raise ValueError(f"need 1 <= K <= N-1, got K={K}, N={N}")
        arr = np.fromiter(self.elements, dtype=np.int64, count=K)
        if arr.min() < 0 or arr.max() >= N:
            raise ValueError(f"elements must lie in [0, {N})")
        if np.unique(arr).shape[0] != K:
            raise ValueError("elements must be distinct")
        return self

    @field_serializer("elements")
    def _hex_elements(self, elements: Tuple[int, ...]) -> List[str]:
        return [to_hex(e, self.n) for e in elements]

    # ── Constructors ──

    @classmethod
    def trusted(cls, n: int, elements) -> "SubsetSpec":
        """Skip validation; for constructors that guarantee the invariants."""
        return cls.model_construct(n=n, elements=tuple(int(e) for e in elements))

    @classmethod
    def first(cls, n: int, K: int) -> "SubsetSpec":
        """The first K strings in lexicographic order."""
        return cls(n=n, elements=tuple(range(K)))

    @classmethod
    def last(cls, n: int, K: int) -> "SubsetSpec":
        N = 1 << n
        return cls(n=n, elements=tuple(range(N - K, N)))

    @classmethod
    def random(cls, n: int, K: int, rng: np.random.Generator) -> "SubsetSpec":
        N = 1 << n
        if not 1 <= K <= N - 1:
            raise ParameterRangeError(f"need 1 <= K <= N-1, got K={K}, N={N}")
        return cls.trusted(n, rng.choice(N, size=K, replace=False))

    # ── Derived quantities ──

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def K(self) -> int:
        return len(self.elements)

    @property
    def beta(self) -> Fraction:
        """K/N = 1/2 + beta."""
        return Fraction(self.K, self.N) - Fraction(1, 2)

    # Computed on demand: numpy values must stay out of the model __dict__.
    def element_array(self) -> np.ndarray:
        return np.fromiter(self.elements, dtype=np.int64, count=self.K)

    def member_mask(self) -> np.ndarray:
        mask = np.zeros(self.N, dtype=bool)
        mask[self.element_array()] = True
        return mask

    def complement_elements(self) -> np.ndarray:
        return np.flatnonzero(~self.member_mask())

    def complement(self) -> "SubsetSpec":
        return SubsetSpec.trusted(self.n, self.complement_elements())


class BalancedFunctionSpec(BaseModel):
    """f_bal with f(x) = 0 exactly on `support` (K = N/2)."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, le=32)
    support: SubsetSpec

    @model_validator(mode="after")
    def _check_balanced(self):
        if self.support.n != self.n:
            raise ValueError("support lives on a different register")
        if self.support.K != 1 << (self.n - 1):
            raise ValueError(f"balanced function needs K = {1 << (self.n - 1)}, got {self.support.K}")
        return self

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "BalancedFunctionSpec":
        return cls(n=n, support=SubsetSpec.random(n, 1 << (n - 1), rng))

    def values(self) -> np.ndarray:
        """Truth table f(x) for x = 0..N-1."""
        return (~self.support.member_mask()).astype(np.int8)


class ConstantFunctionSpec(BaseModel):
    """f_con(x) = 0."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, le=32)

    def values(self) -> np.ndarray:
        return np.zeros(1 << self.n, dtype=np.int8)


# ─── Swapper Parameters ───────────────────────────────────────────────────────

class ZeroErrorConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    b: int = Field(ge=0, le=1)
    q_w: float = Field(ge=0.0, le=1.0)


class CurveRow(BaseModel):
    beta: float
    K: int
    analytic_cs: float
    analytic_ze: float
    analytic_cc: float
    analytic_cl: float
    simulated_cs: Optional[float] = None
    simulated_ze: Optional[float] = None
    simulated_cc: Optional[float] = None
    simulated_cl: Optional[float] = None
    trials: int
    seed: int


# ─── Keyed Permutations ───────────────────────────────────────────────────────

class SaesKey(BaseModel):
    """A 16-bit S-AES key; strings must be exactly four hex digits."""

    model_config = ConfigDict(frozen=True)

    key: int = Field(ge=0, lt=1 << 16)

    @field_validator("key", mode="before")
    @classmethod
    def _parse_hex(cls, value):
        return parse_hex16(value) if isinstance(value, str) else value

    @property
    def hex(self) -> str:
        return to_hex(self.key, 16)


# ─── Classical Bounds ─────────────────────────────────────────────────────────

class BoundsReport(BaseModel):
    N: int = Field(ge=2)
    K: int = Field(ge=1)
    delta: Fraction
    min_queries: Fraction

    @model_validator(mode="after")
    def _check_formula(self):
        expected = self.N - Fraction(2 * (self.N - self.K)) / (2 * self.delta + 1)
        if self.min_queries != expected:
            raise ValueError(f"min_queries {self.min_queries} != {expected}")
        return self


class UniqueDrawDistribution(BaseModel):
    """P[q distinct values after d uniform draws from K values]."""

    K: int = Field(ge=1)
    d: int = Field(ge=1)
    probabilities: Dict[int, Fraction]

    @model_validator(mode="after")
    def _check_distribution(self):
        top = min(self.d, self.K)
        if any(not 1 <= q <= top for q in self.probabilities):
            raise ValueError(f"support must lie in 1..{top}")
        if sum(self.probabilities.values()) != 1:
            raise ValueError("probabilities do not sum to 1")
        return self


class BayesSummary(BaseModel):
    N: int
    K: int
    observed: Tuple[int, ...]
    complements: Tuple[Tuple[int, ...], ...]
    probabilities: Tuple[Fraction, ...]
    expected: Fraction
    uniform: bool


# ─── Game ─────────────────────────────────────────────────────────────────────

class GameConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(default=16, ge=1, le=32)
    rounds: int = Field(default=1, ge=1)
    samples_per_round: int = Field(default=1, ge=1)
    player_kind: PlayerKind = PlayerKind.QUANTUM_COMPLEMENT
    backend: Backend = Backend.SAES
    access: ClassicalAccess = ClassicalAccess.SAMPLES
    master_seed: int = Field(default=0, ge=0, lt=1 << 64)

    @model_validator(mode="after")
    def _check_backend(self):
        if self.backend is Backend.SAES and self.n != 16:
            raise ValueError("the S-AES backend works on 16-bit blocks: n must be 16")
        if self.access is ClassicalAccess.INDEX and self.samples_per_round > 1 << (self.n - 1):
            raise ValueError("index access cannot query more than K = N/2 elements")
        return self


class RoundRecord(BaseModel):
    round: int = Field(ge=0)
    key_hex: Optional[str] = None
    perm_seed: Optional[int] = None
    sample_digest: str
    samples: Optional[List[str]] = None
    candidate_hex: str
    verdict: int = Field(ge=0, le=1)
    tag: str


class GameTranscript(BaseModel):
    config: GameConfig
    records: List[RoundRecord] = []
    artifact_version: str = ARTIFACT_VERSION

    @property
    def rounds(self) -> int:
        return len(self.records)

    @property
    def wins(self) -> int:
        return sum(r.verdict for r in self.records)

    @property
    def all_won(self) -> bool:
        return self.rounds > 0 and self.wins == self.rounds

    @property
    def win_rate(self) -> float:
        return self.wins / self.rounds if self.rounds else 0.0

    @property
    def advantage_threshold(self) -> float:
        """wins/r must reach 1/2 + 1/n to count as a demonstrated advantage."""
        return 0.5 + 1.0 / self.config.n

    @property
    def threshold_passed(self) -> bool:
        return self.win_rate >= self.advantage_threshold


class GameSummary(BaseModel):
    rounds: int
    wins: int
    win_rate: float
    all_won: bool
    ci_low: float
    ci_high: float
    expected_win_rate: Optional[float] = None
    advantage_threshold: float
    threshold_passed: bool


# ─── Run Manifest ─────────────────────────────────────────────────────────────

class RunManifest(BaseModel):
    run_id: str = Field(default_factory=lambda: str(uuid.uuid4()))
    command: str
    parameters: Dict[str, Any]
    master_seed: Optional[int] = None
    artifact_version: str = ARTIFACT_VERSION
    outputs: Dict[str, str] = {}
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
