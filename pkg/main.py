"""
Complement Sampling Lab
Swapper simulations, classical bounds and the verifiable referee/player game.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 range/scale error,
4 internal error.
"""

import sys
import os
sys.path.insert(0, os.path.dirname(__file__))

import argparse
import logging
from typing import List, Optional

from pydantic import ValidationError

from config import DEFAULT_SEED, LEDGER_PATH, LOG_LEVEL
from models.errors import (
    ComplementLabError, DegenerateBranchError, DimensionMismatchError, ParameterRangeError,
    PayloadMismatchError, QubitIndexError, TranscriptError,
)
from routers import bounds, game, manifest, saes, sweep

logger = logging.getLogger("complement_lab")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_RANGE, EXIT_INTERNAL = 0, 1, 2, 3, 4


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="64-bit master seed")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--ledger", default=LEDGER_PATH, help="run ledger database")
    common.add_argument("--no-ledger", dest="ledger_enabled", action="store_false",
                        help="do not record the run manifest")

    parser = argparse.ArgumentParser(
        prog="complement-lab",
        description="Complement sampling laboratory",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Register routers
    sweep.register(subparsers, common)
    bounds.register(subparsers, common)
    game.register(subparsers, common)
    saes.register(subparsers, common)
    manifest.register(subparsers, common)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=LOG_LEVEL, format="[%(name)s] %(message)s")

    if not 0 <= args.seed < 1 << 64:
        logger.error("--seed must lie in [0, 2^64)")
        return EXIT_USAGE

    try:
        return args.handler(args)
    except ParameterRangeError as e:
        logger.error("%s", e)
        return EXIT_RANGE
    except (ValidationError, TranscriptError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except (DimensionMismatchError, DegenerateBranchError, PayloadMismatchError, QubitIndexError) as e:
        logger.exception("internal error: %s", e)
        return EXIT_INTERNAL
    except ValueError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except ComplementLabError as e:
        logger.exception("internal error: %s", e)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
