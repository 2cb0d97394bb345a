"""Complement Sampling Lab - Game & Verify"""

import logging
from pathlib import Path

from config import REFEREE_KEY
from models.schemas import Backend, ClassicalAccess, GameConfig, PlayerKind
from routers.manifest import publish_manifest
from services.game_service import (
    audit_transcript, read_transcript, run_game, summary, write_transcript,
)

logger = logging.getLogger(__name__)


def _choices(enum) -> str:
    return "{" + ",".join(e.value for e in enum) + "}"


def register(subparsers, common):
    p = subparsers.add_parser("game", parents=[common], help="Play r rounds of the complement sampling game")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--rounds", type=int, default=10)
    p.add_argument("--samples", type=int, default=1, help="samples j handed out per round")
    p.add_argument("--player", type=PlayerKind, choices=list(PlayerKind), metavar=_choices(PlayerKind),
                   default=PlayerKind.QUANTUM_COMPLEMENT)
    p.add_argument("--backend", type=Backend, choices=list(Backend), metavar=_choices(Backend), default=Backend.SAES)
    p.add_argument("--access", type=ClassicalAccess, choices=list(ClassicalAccess), metavar=_choices(ClassicalAccess),
                   default=ClassicalAccess.SAMPLES)
    p.add_argument("--format", choices=["jsonl", "json"], default="jsonl")
    p.set_defaults(handler=cmd_game)

    v = subparsers.add_parser("verify", parents=[common], help="Replay a transcript from its master seed")
    v.add_argument("transcript", type=Path)
    v.set_defaults(handler=cmd_verify)


def _print_summary(s) -> None:
    print(f"rounds={s.rounds} wins={s.wins} win_rate={s.win_rate:.6f} "
          f"ci95=[{s.ci_low:.6f}, {s.ci_high:.6f}] all_won={s.all_won}")
    if s.expected_win_rate is not None:
        print(f"expected_win_rate={s.expected_win_rate:.6f}")
    print(f"advantage_threshold={s.advantage_threshold:.6f} passed={s.threshold_passed}")


def cmd_game(args) -> int:
    config = GameConfig(
        n=args.n,
        rounds=args.rounds,
        samples_per_round=args.samples,
        player_kind=args.player,
        backend=args.backend,
        access=args.access,
        master_seed=args.seed,
    )
    transcript = run_game(config, REFEREE_KEY)
    _print_summary(summary(transcript))

    if args.out is not None:
        out = write_transcript(transcript, args.out, args.format)
        publish_manifest(
            args,
            parameters={**config.model_dump(mode="json"), "format": args.format},
            outputs=[out],
            master_seed=config.master_seed,
        )
    return 0


def cmd_verify(args) -> int:
    """Exit 0 iff every round replays; 1 with one diagnostic line per mismatch otherwise."""
    transcript = read_transcript(args.transcript)
    reasons = audit_transcript(transcript, referee_key=REFEREE_KEY)
    for reason in reasons:
        print(f"MISMATCH {reason}")
    if reasons:
        logger.warning("%s failed verification (%d issues)", args.transcript, len(reasons))
        return 1
    print(f"OK {transcript.rounds} rounds verified")
    return 0
