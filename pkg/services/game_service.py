"""
Complement Sampling Lab - Referee / Player Game

Each round the referee derives a keyed permutation P from the master seed,
takes S = { P(0||i) }, hands out j samples (strings or copies of |S>), and
accepts the player's candidate iff P^-1(candidate) has leading bit 1.
"""

import hashlib
import hmac
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError
from scipy.stats import binomtest

from models.errors import PayloadMismatchError, ScaleError, TranscriptError
from models.schemas import (
    Backend, ClassicalAccess, GameConfig, GameSummary, GameTranscript, PlayerKind,
    RoundRecord, SubsetSpec, parse_bits, to_hex,
)
from models.state import StateVector
from services.classical_service import (
    MAX_DRAWS, guess_outside, random_guess_success, sample_complexity_success,
)
from services.prp_service import (
    MAX_TABLE_BITS, PermutationOracle, make_prp_oracle, make_random_oracle,
    subset_from_permutation, verify_complement,
)
from services.seeding import STREAM_KEY, STREAM_PLAYER, STREAM_REFEREE, derive_rng, derive_seed
from services.simulator_service import apply_diffusion, measure_all
from services.subset_service import make_subset_state
from services.swapper_service import coupon_collector_sample, repeated_flagged_swap

logger = logging.getLogger(__name__)


# ─── Payloads ─────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class ClassicalPayload:
    n: int
    samples: np.ndarray

    def digest(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.samples, dtype="<u4").tobytes()).hexdigest()


@dataclass(frozen=True, eq=False)
class QuantumPayload:
    """j references to the same |S>; K is public, S is not."""

    n: int
    K: int
    copies: Tuple[StateVector, ...]

    def digest(self) -> str:
        h = hashlib.sha256(self.copies[0].amplitudes.tobytes())
        h.update(len(self.copies).to_bytes(4, "little"))
        return h.hexdigest()


Payload = Union[ClassicalPayload, QuantumPayload]


@dataclass(eq=False)
class RefereeRound:
    round_index: int
    oracle: PermutationOracle
    key_hex: Optional[str]
    perm_seed: Optional[int]
    payload: Payload

    @cached_property
    def spec(self) -> SubsetSpec:
        return subset_from_permutation(self.oracle)

    def verify(self, candidate: int) -> int:
        return int(verify_complement(self.oracle, candidate))


# ─── Referee ──────────────────────────────────────────────────────────────────

def round_oracle(config: GameConfig, round_index: int) -> Tuple[PermutationOracle, Optional[str], Optional[int]]:
    """The round's permutation, re-derivable from (master_seed, round_index) alone."""
    if config.backend is Backend.SAES:
        key = int(derive_rng(config.master_seed, round_index, STREAM_KEY).integers(1 << 16))
        return make_prp_oracle(key), to_hex(key, 16), None
    if config.n > MAX_TABLE_BITS:
        raise ScaleError(f"random_table backend limited to n <= {MAX_TABLE_BITS}, got {config.n}")
    perm_seed = derive_seed(config.master_seed, round_index, STREAM_KEY)
    return make_random_oracle(config.n, perm_seed), None, perm_seed


def referee_round(config: GameConfig, round_index: int) -> RefereeRound:
    if config.n > MAX_TABLE_BITS:
        raise ScaleError(f"games limited to n <= {MAX_TABLE_BITS}, got {config.n}")
    oracle, key_hex, perm_seed = round_oracle(config, round_index)
    half = 1 << (config.n - 1)
    j = config.samples_per_round

    if config.player_kind.is_quantum:
        state = make_subset_state(subset_from_permutation(oracle))
        payload = QuantumPayload(n=config.n, K=half, copies=(state,) * j)
    else:
        if config.access is ClassicalAccess.SAMPLES:
            rng = derive_rng(config.master_seed, round_index, STREAM_REFEREE)
            indices = rng.integers(half, size=j)
        else:
            indices = np.arange(j)
        payload = ClassicalPayload(n=config.n, samples=np.asarray(oracle.forward(indices), dtype=np.int64))

    return RefereeRound(round_index, oracle, key_hex, perm_seed, payload)


# ─── Players ──────────────────────────────────────────────────────────────────

def play_round(payload: Payload, player_kind: PlayerKind, rng: np.random.Generator) -> int:
    if player_kind.is_quantum != isinstance(payload, QuantumPayload):
        raise PayloadMismatchError(f"{player_kind.value} player cannot use a {type(payload).__name__}")

    if player_kind is PlayerKind.QUANTUM_COMPLEMENT:
        return measure_all(apply_diffusion(payload.copies[0]), rng)
    if player_kind is PlayerKind.QUANTUM_ZERO_ERROR:
        attempt = repeated_flagged_swap(payload.copies, payload.K, rng)
        if attempt.flag == 0:
            return attempt.sample
        return int(rng.integers(1 << payload.n))
    if player_kind is PlayerKind.COUPON_COLLECTOR:
        return coupon_collector_sample(payload.copies[0], rng)
    return guess_outside(payload.samples, payload.n, rng)


# ─── Game ─────────────────────────────────────────────────────────────────────

def _tag(config: GameConfig, record: RoundRecord, referee_key: Optional[str] = None) -> str:
    """
    HMAC-SHA256 over the record. With a referee key kept out of the transcript
    this authenticates the round; without one it is keyed by the master seed,
    which the header carries, and only guards against accidental edits.
    """
    key = referee_key.encode() if referee_key else config.master_seed.to_bytes(8, "big")
    message = record.model_dump_json(exclude={"tag"}).encode()
    return hmac.new(key, message, hashlib.sha256).hexdigest()


def run_game(config: GameConfig, referee_key: Optional[str] = None) -> GameTranscript:
    records: List[RoundRecord] = []
    for t in range(config.rounds):
        referee = referee_round(config, t)
        candidate = play_round(referee.payload, config.player_kind, derive_rng(config.master_seed, t, STREAM_PLAYER))
        payload = referee.payload
        record = RoundRecord(
            round=t,
            key_hex=referee.key_hex,
            perm_seed=referee.perm_seed,
            sample_digest=payload.digest(),
            samples=[to_hex(s, config.n) for s in payload.samples] if isinstance(payload, ClassicalPayload) else None,
            candidate_hex=to_hex(candidate, config.n),
            verdict=referee.verify(candidate),
            tag="",
        )
        records.append(record.model_copy(update={"tag": _tag(config, record, referee_key)}))

    transcript = GameTranscript(config=config, records=records)
    logger.info(
        "game finished: %s won %d/%d rounds", config.player_kind.value, transcript.wins, transcript.rounds,
    )
    return transcript


def audit_transcript(
    transcript: GameTranscript,
    config: Optional[GameConfig] = None,
    referee_key: Optional[str] = None,
) -> List[str]:
    """Per-round reasons the transcript does not replay; empty when it verifies."""
    config = config or transcript.config
    reasons = []
    if transcript.config != config:
        reasons.append("transcript header does not match the given config")
    if transcript.rounds != config.rounds:
        reasons.append(f"expected {config.rounds} rounds, found {transcript.rounds}")

    for position, record in enumerate(transcript.records):
        t = record.round
        if t != position:
            reasons.append(f"record {position}: round index {t} out of order")
        oracle, key_hex, perm_seed = round_oracle(config, t)
        if (record.key_hex, record.perm_seed) != (key_hex, perm_seed):
            reasons.append(f"round {t}: key does not re-derive from the master seed")
        if not hmac.compare_digest(record.tag, _tag(config, record, referee_key)):
            reasons.append(f"round {t}: integrity tag mismatch")
        try:
            candidate = parse_bits(record.candidate_hex)
        except ValueError as e:
            raise TranscriptError(f"round {t}: unreadable candidate {record.candidate_hex!r}") from e
        if not 0 <= candidate < 1 << config.n:
            reasons.append(f"round {t}: candidate outside {{0,1}}^{config.n}")
            continue
        verdict = int(verify_complement(oracle, candidate))
        if verdict != record.verdict:
            reasons.append(f"round {t}: stored verdict {record.verdict}, recomputed {verdict}")
        if record.samples is not None:
            samples = np.array([parse_bits(s) for s in record.samples], dtype=np.int64)
            if np.any(verify_complement(oracle, samples)):
                reasons.append(f"round {t}: issued samples are not members of S")
    return reasons


def verify_transcript(
    transcript: GameTranscript,
    config: Optional[GameConfig] = None,
    referee_key: Optional[str] = None,
) -> int:
    """1 iff every round re-derives and every stored verdict recomputes."""
    reasons = audit_transcript(transcript, config, referee_key)
    for reason in reasons:
        logger.warning(reason)
    return int(not reasons)


# ─── Summary ──────────────────────────────────────────────────────────────────

def expected_win_rate(config: GameConfig) -> Optional[Fraction]:
    """Analytic per-round win probability at K = N/2, when one is known."""
    N, K, j = 1 << config.n, 1 << (config.n - 1), config.samples_per_round
    kind = config.player_kind
    if kind in (PlayerKind.QUANTUM_COMPLEMENT, PlayerKind.QUANTUM_ZERO_ERROR):
        return Fraction(1)
    if kind is PlayerKind.COUPON_COLLECTOR:
        return Fraction(1, 2)
    if config.access is ClassicalAccess.INDEX:
        return random_guess_success(N, K, j)
    if j <= MAX_DRAWS:
        return sample_complexity_success(N, K, j)
    return None


def summary(transcript: GameTranscript) -> GameSummary:
    ci = binomtest(transcript.wins, transcript.rounds).proportion_ci(confidence_level=0.95)
    expected = expected_win_rate(transcript.config)
    return GameSummary(
        rounds=transcript.rounds,
        wins=transcript.wins,
        win_rate=transcript.win_rate,
        all_won=transcript.all_won,
        ci_low=ci.low,
        ci_high=ci.high,
        expected_win_rate=None if expected is None else float(expected),
        advantage_threshold=transcript.advantage_threshold,
        threshold_passed=transcript.threshold_passed,
    )


# ─── Transcript files ─────────────────────────────────────────────────────────

def write_transcript(transcript: GameTranscript, path: Union[str, Path], fmt: str = "jsonl") -> Path:
    """JSON lines (header, one line per round, summary) or a single JSON document."""
    path = Path(path)
    header = {"config": transcript.config.model_dump(mode="json"), "artifact_version": transcript.artifact_version}
    summary_json = summary(transcript).model_dump(mode="json")

    if fmt == "json":
        body = json.dumps({
            **header,
            "records": [r.model_dump(mode="json") for r in transcript.records],
            "summary": summary_json,
        }, indent=2)
    elif fmt == "jsonl":
        lines = [json.dumps({"type": "header", **header})]
        lines += [json.dumps({"type": "round", **r.model_dump(mode="json")}) for r in transcript.records]
        lines.append(json.dumps({"type": "summary", **summary_json}))
        body = "\n".join(lines)
    else:
        raise ValueError(f"unknown transcript format {fmt!r}")

    path.write_text(body + "\n")
    logger.info("transcript written to %s", path)
    return path


def read_transcript(path: Union[str, Path]) -> GameTranscript:
    text = Path(path).read_text()
    try:
        try:
            document = json.loads(text)
        except json.JSONDecodeError:
            document = None

        if isinstance(document, dict) and "records" in document:
            header, rounds = document, document["records"]
        else:
            entries = [json.loads(line) for line in text.splitlines() if line.strip()]
            headers = [e for e in entries if e.get("type") == "header"]
            if len(headers) != 1:
                raise TranscriptError(f"{path}: expected exactly one header line, found {len(headers)}")
            header = headers[0]
            rounds = [{k: v for k, v in e.items() if k != "type"} for e in entries if e.get("type") == "round"]

        return GameTranscript(
            config=GameConfig.model_validate(header["config"]),
            records=[RoundRecord.model_validate(r) for r in rounds],
            artifact_version=header.get("artifact_version", ""),
        )
    except (json.JSONDecodeError, KeyError, AttributeError, ValidationError) as e:
        raise TranscriptError(f"{path}: malformed transcript ({e})") from e
