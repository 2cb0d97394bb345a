"""
Complement Sampling Lab - Run Ledger (SQLite + aiosqlite for async I/O)
"""

import json
import logging
from contextlib import asynccontextmanager
from typing import AsyncIterator, List, Optional

import aiosqlite

from config import LEDGER_PATH
from models.schemas import RunManifest

logger = logging.getLogger(__name__)


# SQLite INTEGER is signed 64-bit; seeds live in [0, 2^64).
def _to_signed(seed: Optional[int]) -> Optional[int]:
    return seed if seed is None or seed < 1 << 63 else seed - (1 << 64)


def _from_signed(value: Optional[int]) -> Optional[int]:
    return value if value is None or value >= 0 else value + (1 << 64)


@asynccontextmanager
async def get_db(path: str = LEDGER_PATH) -> AsyncIterator[aiosqlite.Connection]:
    """Yields a ledger connection."""
    async with aiosqlite.connect(path) as db:
        db.row_factory = aiosqlite.Row
        yield db


async def init_db(path: str = LEDGER_PATH) -> None:
    """Create tables if missing."""
    async with aiosqlite.connect(path) as db:
        await db.executescript("""
            PRAGMA journal_mode=WAL;

            CREATE TABLE IF NOT EXISTS run_manifests (
                run_id           TEXT PRIMARY KEY,
                command          TEXT NOT NULL,
                parameters_json  TEXT NOT NULL,
                master_seed      INTEGER,
                artifact_version TEXT NOT NULL,
                outputs_json     TEXT NOT NULL DEFAULT '{}',
                created_at       TEXT NOT NULL
            );

            CREATE INDEX IF NOT EXISTS idx_run_manifests_command
                ON run_manifests(command, created_at);
        """)
        await db.commit()
    logger.info("ledger initialised at %s", path)


async def record_manifest(manifest: RunManifest, path: str = LEDGER_PATH) -> None:
    await init_db(path)
    async with get_db(path) as db:
        await db.execute(
            """
            INSERT INTO run_manifests
            (run_id, command, parameters_json, master_seed, artifact_version, outputs_json, created_at)
            VALUES (?, ?, ?, ?, ?, ?, ?)
            """,
            (
                manifest.run_id,
                manifest.command,
                json.dumps(manifest.parameters, sort_keys=True, default=str),
                _to_signed(manifest.master_seed),
                manifest.artifact_version,
                json.dumps(manifest.outputs, sort_keys=True),
                manifest.created_at.isoformat(),
            ),
        )
        await db.commit()


async def list_manifests(path: str = LEDGER_PATH, command: Optional[str] = None) -> List[RunManifest]:
    """All recorded runs, oldest first, optionally for one command."""
    await init_db(path)
    query = "SELECT * FROM run_manifests"
    params: tuple = ()
    if command:
        query += " WHERE command = ?"
        params = (command,)
    query += " ORDER BY created_at"

    async with get_db(path) as db:
        async with db.execute(query, params) as cur:
            rows = await cur.fetchall()

    return [
        RunManifest(
            run_id=row["run_id"],
            command=row["command"],
            parameters=json.loads(row["parameters_json"]),
            master_seed=_from_signed(row["master_seed"]),
            artifact_version=row["artifact_version"],
            outputs=json.loads(row["outputs_json"]),
            created_at=row["created_at"],
        )
        for row in rows
    ]
