"""Complement Sampling Lab - Run manifests"""

import argparse
import asyncio
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

from db.database import list_manifests, record_manifest
from models.schemas import RunManifest

logger = logging.getLogger(__name__)


def file_digest(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def manifest_path(out: Path) -> Path:
    return out.with_name(out.name + ".manifest.json")


def publish_manifest(
    args: argparse.Namespace,
    parameters: Dict[str, Any],
    outputs: Iterable[Path],
    master_seed: Optional[int] = None,
) -> RunManifest:
    """Digest the outputs, write `<out>.manifest.json` beside the first one, and record it in the ledger."""
    outputs = [Path(p) for p in outputs]
    manifest = RunManifest(
        command=args.command,
        parameters=parameters,
        master_seed=master_seed,
        outputs={str(p): file_digest(p) for p in outputs},
    )
    target = manifest_path(outputs[0])
    target.write_text(json.dumps(manifest.model_dump(mode="json"), indent=2, sort_keys=True) + "\n")

    if args.ledger_enabled:
        asyncio.run(record_manifest(manifest, args.ledger))
        logger.info("run %s recorded in %s", manifest.run_id, args.ledger)
    return manifest


def register(subparsers, common):
    p = subparsers.add_parser("ledger", parents=[common], help="List recorded runs")
    p.add_argument("--for-command", dest="for_command", default=None, help="only runs of this command")
    p.set_defaults(handler=cmd_ledger)


def cmd_ledger(args) -> int:
    manifests = asyncio.run(list_manifests(args.ledger, args.for_command))
    for m in manifests:
        print(f"{m.created_at.isoformat()}  {m.run_id}  {m.command:<10}  seed={m.master_seed}  "
              f"outputs={','.join(m.outputs) or '-'}")
    return 0
