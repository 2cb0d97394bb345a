"""Complement Sampling Lab - S-AES tool"""

import logging

from models.schemas import Direction, SaesKey, parse_hex16, to_hex
from services.prp_service import SaesCipher

logger = logging.getLogger(__name__)


def register(subparsers, common):
    p = subparsers.add_parser("saes", parents=[common], help="Encrypt or decrypt one 16-bit block")
    p.add_argument("--key", required=True, help="4 hex digits")
    p.add_argument("--block", required=True, help="4 hex digits")
    p.add_argument("--direction", type=Direction, choices=list(Direction), metavar="{encrypt,decrypt}",
                   default=Direction.ENCRYPT)
    p.set_defaults(handler=cmd_saes)


def cmd_saes(args) -> int:
    try:
        key = SaesKey(key=args.key)
        block = parse_hex16(args.block)
    except ValueError as e:
        logger.error("%s", e)
        return 2

    cipher = SaesCipher(key)
    result = cipher.encrypt(block) if args.direction is Direction.ENCRYPT else cipher.decrypt(block)
    print(to_hex(result, 16))
    return 0
