import asyncio

from db.database import init_db, list_manifests, record_manifest
from main import main
from models.schemas import RunManifest


def test_record_and_list(tmp_path):
    ledger = str(tmp_path / "ledger.db")

    async def scenario():
        await init_db(ledger)
        await record_manifest(RunManifest(command="bounds", parameters={"n": 4}), ledger)
        await record_manifest(RunManifest(command="game", parameters={"rounds": 3}, master_seed=11,
                                          outputs={"game.jsonl": "ab" * 32}), ledger)
        return await list_manifests(ledger), await list_manifests(ledger, "game")

    everything, games = asyncio.run(scenario())
    assert [m.command for m in everything] == ["bounds", "game"]
    assert len(games) == 1
    assert games[0].master_seed == 11
    assert games[0].parameters == {"rounds": 3}
    assert games[0].outputs == {"game.jsonl": "ab" * 32}


def test_full_width_seeds_survive(tmp_path):
    ledger = str(tmp_path / "ledger.db")
    seed = (1 << 64) - 1
    manifest = RunManifest(command="game", parameters={}, master_seed=seed)
    asyncio.run(record_manifest(manifest, ledger))
    (stored,) = asyncio.run(list_manifests(ledger))
    assert stored.master_seed == seed
    assert stored.run_id == manifest.run_id
    assert stored.created_at == manifest.created_at


def test_empty_ledger(tmp_path):
    assert asyncio.run(list_manifests(str(tmp_path / "fresh.db"))) == []


def test_cli_runs_are_recorded(tmp_path, capsys):
    ledger = str(tmp_path / "ledger.db")
    out = tmp_path / "bounds.csv"
    assert main(["bounds", "--n", "4", "--d", "3", "--out", str(out), "--ledger", ledger]) == 0
    capsys.readouterr()

    assert main(["ledger", "--ledger", ledger]) == 0
    listing = capsys.readouterr().out.splitlines()
    assert len(listing) == 1
    assert "bounds" in listing[0]
    assert str(out) in listing[0]

    assert main(["ledger", "--for-command", "game", "--ledger", ledger]) == 0
    assert capsys.readouterr().out == ""


def test_no_ledger_skips_recording(tmp_path, capsys):
    ledger = tmp_path / "ledger.db"
    out = tmp_path / "curves.csv"
    assert main(["sweep-beta", "--n", "2", "--trials", "0", "--out", str(out),
                 "--ledger", str(ledger), "--no-ledger"]) == 0
    assert not ledger.exists()
