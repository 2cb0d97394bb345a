"""
Complement Sampling Lab - Keyed Permutations

S-AES (16-bit block, 16-bit key, two rounds) and explicit seeded permutation
tables, plus the subset family S = { P(0||i) } they generate.

S-AES state layout: the 16-bit word n0 n1 n2 n3 (n0 = high nibble) is the
column-major 2x2 nibble matrix [[n0, n2], [n1, n3]].
"""

from abc import ABC, abstractmethod
from typing import Tuple, Union

import numpy as np

from models.errors import ParameterRangeError, ScaleError
from models.schemas import SaesKey, SubsetSpec

MAX_TABLE_BITS = 20

SBOX = np.array([0x9, 0x4, 0xA, 0xB, 0xD, 0x1, 0x8, 0x5,
                 0x6, 0x2, 0x0, 0x3, 0xC, 0xE, 0xF, 0x7], dtype=np.int64)
INV_SBOX = np.argsort(SBOX).astype(np.int64)

RCON = (0x80, 0x30)

Block = Union[int, np.ndarray]


# ─── GF(2^4) and word tables ──────────────────────────────────────────────────

def gf16_mul(a: int, b: int) -> int:
    """Multiply in GF(16) modulo x^4 + x + 1."""
    product = 0
    for _ in range(4):
        if b & 1:
            product ^= a
        b >>= 1
        a <<= 1
        if a & 0x10:
            a ^= 0x13
    return product


GF16_MUL = np.array([[gf16_mul(a, b) for b in range(16)] for a in range(16)], dtype=np.int64)


def _nibbles(words: np.ndarray) -> Tuple[np.ndarray, ...]:
    return (words >> 12) & 0xF, (words >> 8) & 0xF, (words >> 4) & 0xF, words & 0xF


def _pack(n0, n1, n2, n3) -> np.ndarray:
    return (n0 << 12) | (n1 << 8) | (n2 << 4) | n3


def _mix_table(diag: int, off: int) -> np.ndarray:
    n0, n1, n2, n3 = _nibbles(np.arange(1 << 16, dtype=np.int64))
    mul = GF16_MUL
    return _pack(
        mul[diag, n0] ^ mul[off, n1], mul[off, n0] ^ mul[diag, n1],
        mul[diag, n2] ^ mul[off, n3], mul[off, n2] ^ mul[diag, n3],
    )


_ALL_WORDS = _nibbles(np.arange(1 << 16, dtype=np.int64))
SUB_WORD     = _pack(*(SBOX[n] for n in _ALL_WORDS))
INV_SUB_WORD = _pack(*(INV_SBOX[n] for n in _ALL_WORDS))
MIX_WORD     = _mix_table(1, 4)
INV_MIX_WORD = _mix_table(9, 2)
del _ALL_WORDS


def shift_rows(words: Block) -> Block:
    """Swap nibbles n1 and n3 (second row of the state matrix); self-inverse."""
    return (words & 0xF0F0) | ((words & 0x0F00) >> 8) | ((words & 0x000F) << 8)


# ─── S-AES ────────────────────────────────────────────────────────────────────

def _sub_rot_byte(byte: int) -> int:
    """SubNib(RotNib(byte))."""
    return (int(SBOX[byte & 0xF]) << 4) | int(SBOX[byte >> 4])


def expand_key(key: Union[SaesKey, int, str]) -> Tuple[int, int, int]:
    """Round keys K0, K1, K2 from the 16-bit cipher key."""
    key = key if isinstance(key, SaesKey) else SaesKey(key=key)
    w0, w1 = key.key >> 8, key.key & 0xFF
    w2 = w0 ^ RCON[0] ^ _sub_rot_byte(w1)
    w3 = w2 ^ w1
    w4 = w2 ^ RCON[1] ^ _sub_rot_byte(w3)
    w5 = w4 ^ w3
    return key.key, (w2 << 8) | w3, (w4 << 8) | w5


def _as_blocks(block: Block) -> np.ndarray:
    words = np.asarray(block, dtype=np.int64)
    if words.size and (words.min() < 0 or words.max() >= 1 << 16):
        raise ParameterRangeError("S-AES blocks must be 16-bit values")
    return words


def _unwrap(words: np.ndarray) -> Block:
    return int(words) if words.ndim == 0 else words


class SaesCipher:
    """S-AES with pre-expanded round keys; works on ints and on numpy arrays of blocks."""

    def __init__(self, key: Union[SaesKey, int, str]):
        self.key = key if isinstance(key, SaesKey) else SaesKey(key=key)
        self.round_keys = expand_key(self.key)

    def encrypt(self, block: Block) -> Block:
        k0, k1, k2 = self.round_keys
        w = _as_blocks(block) ^ k0
        w = MIX_WORD[shift_rows(SUB_WORD[w])] ^ k1
        w = shift_rows(SUB_WORD[w]) ^ k2
        return _unwrap(w)

    def decrypt(self, block: Block) -> Block:
        k0, k1, k2 = self.round_keys
        w = INV_SUB_WORD[shift_rows(_as_blocks(block) ^ k2)] ^ k1
        w = INV_SUB_WORD[shift_rows(INV_MIX_WORD[w])] ^ k0
        return _unwrap(w)


def saes_encrypt(key: Union[SaesKey, int, str], block: Block) -> Block:
    return SaesCipher(key).encrypt(block)


def saes_decrypt(key: Union[SaesKey, int, str], block: Block) -> Block:
    return SaesCipher(key).decrypt(block)


def avalanche_mean(cipher: SaesCipher, samples: int, rng: np.random.Generator) -> float:
    """Mean number of ciphertext bits flipped by a single-bit plaintext change. Smoke metric only."""
    blocks = rng.integers(1 << 16, size=samples)
    flipped = blocks ^ (1 << rng.integers(16, size=samples))
    diff = cipher.encrypt(blocks) ^ cipher.encrypt(flipped)
    return float(np.bitwise_count(diff).mean())


# ─── Permutation oracles ──────────────────────────────────────────────────────

class PermutationOracle(ABC):
    """A keyed bijection on n-bit strings; forward and inverse accept ints or arrays."""

    n: int

    @property
    def N(self) -> int:
        return 1 << self.n

    @abstractmethod
    def forward(self, x: Block) -> Block: ...

    @abstractmethod
    def inverse(self, y: Block) -> Block: ...

    def forward_table(self) -> np.ndarray:
        return self.forward(np.arange(self.N, dtype=np.int64))


class SaesPermutation(PermutationOracle):
    n = 16

    def __init__(self, key: Union[SaesKey, int, str]):
        self.cipher = SaesCipher(key)

    @property
    def key(self) -> SaesKey:
        return self.cipher.key

    def forward(self, x: Block) -> Block:
        return self.cipher.encrypt(x)

    def inverse(self, y: Block) -> Block:
        return self.cipher.decrypt(y)


class TablePermutation(PermutationOracle):
    """Explicit permutation of [0, 2^n) held as forward and inverse uint32 tables."""

    def __init__(self, n: int, table: np.ndarray):
        if not 1 <= n <= MAX_TABLE_BITS:
            raise ScaleError(f"explicit permutation tables support 1 <= n <= {MAX_TABLE_BITS}, got {n}")
        table = np.asarray(table, dtype=np.uint32).reshape(-1)
        if table.shape[0] != 1 << n or np.bincount(table, minlength=1 << n).max() != 1:
            raise ParameterRangeError(f"table is not a permutation of [0, {1 << n})")
        self.n = n
        self._forward = table
        self._inverse = np.empty_like(table)
        self._inverse[table] = np.arange(1 << n, dtype=np.uint32)
        self._forward.setflags(write=False)
        self._inverse.setflags(write=False)

    @classmethod
    def from_seed(cls, n: int, seed: int) -> "TablePermutation":
        if not 1 <= n <= MAX_TABLE_BITS:
            raise ScaleError(f"explicit permutation tables support 1 <= n <= {MAX_TABLE_BITS}, got {n}")
        rng = np.random.default_rng(seed)
        return cls(n, rng.permutation(1 << n).astype(np.uint32))

    def _lookup(self, table: np.ndarray, x: Block) -> Block:
        idx = np.asarray(x, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.N):
            raise ParameterRangeError(f"input outside [0, {self.N})")
        return _unwrap(table[idx].astype(np.int64))

    def forward(self, x: Block) -> Block:
        return self._lookup(self._forward, x)

    def inverse(self, y: Block) -> Block:
        return self._lookup(self._inverse, y)

    def to_bytes(self) -> bytes:
        """2^n little-endian uint32 entries."""
        return self._forward.astype("<u4").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "TablePermutation":
        table = np.frombuffer(data, dtype="<u4")
        n = table.shape[0].bit_length() - 1
        if table.shape[0] < 2 or 1 << n != table.shape[0]:
            raise ParameterRangeError(f"{table.shape[0]} entries is not a power of two")
        return cls(n, table)


def make_prp_oracle(key: Union[SaesKey, int, str]) -> SaesPermutation:
    return SaesPermutation(key)


def make_random_oracle(n: int, seed: int) -> TablePermutation:
    """Uniform permutation of {0,1}^n from a seeded Fisher-Yates shuffle."""
    return TablePermutation.from_seed(n, seed)


# ─── Subset family ────────────────────────────────────────────────────────────

def subset_from_permutation(oracle: PermutationOracle) -> SubsetSpec:
    """S = [P(0||i) for i in 0..2^(n-1)), in i-order, so O_index(i+1) = P(0||i)."""
    half = 1 << (oracle.n - 1)
    return SubsetSpec.trusted(oracle.n, oracle.forward(np.arange(half, dtype=np.int64)))


def verify_complement(oracle: PermutationOracle, candidate: Block) -> Block:
    """1 iff P^-1(candidate) has leading bit 1, i.e. candidate lies outside S."""
    return oracle.inverse(candidate) >> (oracle.n - 1)
