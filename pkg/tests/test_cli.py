import json
from fractions import Fraction

import pytest

from main import main
from models.errors import DegenerateBranchError
from routers import saes


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


# ─── sweep-beta ───────────────────────────────────────────────────────────────

def test_sweep_every_admissible_beta(capsys):
    code, out = run(capsys, "sweep-beta", "--n", "4", "--trials", "200", "--no-ledger")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 16
    assert lines[0].startswith("beta,K,analytic_cs")
    balanced = next(line for line in lines[1:] if line.split(",")[1] == "8")
    assert balanced.split(",")[2:6] == ["1.0", "1.0", "0.5", str(8 / 15)]


def test_sweep_is_reproducible(capsys):
    argv = ["sweep-beta", "--n", "3", "--trials", "500", "--seed", "99", "--no-ledger"]
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second


def test_sweep_analytic_json(capsys):
    code, out = run(capsys, "sweep-beta", "--n", "2", "--trials", "0", "--beta", "0,1/4", "--format", "json",
                    "--no-ledger")
    assert code == 0
    rows = json.loads(out)
    assert [r["K"] for r in rows] == [2, 3]
    assert rows[0]["simulated_cs"] is None


def test_sweep_rejects_large_registers(capsys):
    assert run(capsys, "sweep-beta", "--n", "13", "--no-ledger")[0] == 2


def test_sweep_rejects_inadmissible_beta(capsys):
    assert run(capsys, "sweep-beta", "--n", "4", "--beta", "1/3", "--no-ledger")[0] == 3


def test_sweep_writes_manifest(tmp_path, capsys):
    out = tmp_path / "curves.csv"
    code, _ = run(capsys, "sweep-beta", "--n", "3", "--trials", "100", "--out", str(out), "--no-ledger")
    assert code == 0
    manifest = json.loads((tmp_path / "curves.csv.manifest.json").read_text())
    assert manifest["command"] == "sweep-beta"
    assert str(out) in manifest["outputs"]


# ─── bounds ───────────────────────────────────────────────────────────────────

def test_bounds_headline_row(capsys):
    code, out = run(capsys, "bounds", "--n", "16", "--k", "32768", "--d", "4", "--no-ledger")
    assert code == 0
    assert "lower_bound_queries,65536,32768,1/6,,,16384,16384.0" in out.splitlines()


def test_bounds_full_delta(capsys):
    _, out = run(capsys, "bounds", "--n", "4", "--k", "8", "--delta", "1/2", "--d", "2", "--no-ledger")
    assert "lower_bound_queries,16,8,1/2,,,8,8.0" in out.splitlines()


def test_bounds_success_grows_with_draws(capsys):
    _, out = run(capsys, "bounds", "--n", "6", "--d", "40", "--format", "json", "--no-ledger")
    rows = [r for r in json.loads(out) if r["quantity"] == "sample_complexity_success"]
    assert [r["d"] for r in rows] == list(range(1, 41))
    values = [Fraction(r["exact"]) for r in rows]
    assert all(a <= b for a, b in zip(values, values[1:]))
    assert values[0] == Fraction(32, 63)


def test_bounds_rejects_large_delta(capsys):
    assert run(capsys, "bounds", "--n", "4", "--delta", "0.7", "--no-ledger")[0] == 3


def test_bounds_needs_k_for_wide_registers(capsys):
    assert run(capsys, "bounds", "--n", "24", "--no-ledger")[0] == 3


# ─── game / verify ────────────────────────────────────────────────────────────

def test_game_then_verify(tmp_path, capsys):
    transcript = tmp_path / "game.jsonl"
    code, out = run(capsys, "game", "--n", "16", "--rounds", "10", "--seed", "7", "--out", str(transcript),
                    "--no-ledger")
    assert code == 0
    assert "wins=10" in out
    assert (tmp_path / "game.jsonl.manifest.json").exists()

    code, out = run(capsys, "verify", str(transcript), "--no-ledger")
    assert code == 0
    assert out.strip() == "OK 10 rounds verified"


def test_verify_flags_tampering(tmp_path, capsys):
    transcript = tmp_path / "game.jsonl"
    run(capsys, "game", "--n", "6", "--backend", "random_table", "--rounds", "4", "--out", str(transcript),
        "--no-ledger")
    lines = transcript.read_text().splitlines()
    record = json.loads(lines[2])
    record["verdict"] = 1 - record["verdict"]
    lines[2] = json.dumps(record)
    transcript.write_text("\n".join(lines) + "\n")

    code, out = run(capsys, "verify", str(transcript), "--no-ledger")
    assert code == 1
    assert out.startswith("MISMATCH round 1")


def test_verify_rejects_garbage(tmp_path, capsys):
    path = tmp_path / "junk.jsonl"
    path.write_text("{{{\n")
    assert run(capsys, "verify", str(path), "--no-ledger")[0] == 2


def test_game_rejects_saes_on_narrow_register(capsys):
    assert run(capsys, "game", "--n", "8", "--no-ledger")[0] == 2


# ─── saes ─────────────────────────────────────────────────────────────────────

def test_saes_encrypt(capsys):
    assert run(capsys, "saes", "--key", "4AF5", "--block", "D728", "--no-ledger") == (0, "24ec\n")


def test_saes_decrypt(capsys):
    code, out = run(capsys, "saes", "--key", "4af5", "--block", "24ec", "--direction", "decrypt", "--no-ledger")
    assert (code, out) == (0, "d728\n")


@pytest.mark.parametrize("key, block", [("4AF", "D728"), ("4AF5", "XYZW"), ("4AF5", "D7280")])
def test_saes_malformed_hex(key, block, capsys):
    assert run(capsys, "saes", "--key", key, "--block", block, "--no-ledger")[0] == 2


def test_saes_has_no_register_width():
    with pytest.raises(SystemExit) as exc:
        main(["saes", "--key", "4AF5", "--block", "D728", "--n", "8"])
    assert exc.value.code == 2


# ─── Common options ───────────────────────────────────────────────────────────

def test_seed_must_fit_in_64_bits(capsys):
    assert run(capsys, "saes", "--key", "4AF5", "--block", "D728", "--seed", "-1", "--no-ledger")[0] == 2
    assert run(capsys, "saes", "--key", "4AF5", "--block", "D728", "--seed", str(1 << 64), "--no-ledger")[0] == 2


def test_internal_errors_have_their_own_exit_code(monkeypatch, capsys):
    def broken(args):
        raise DegenerateBranchError("branch has zero mass")

    monkeypatch.setattr(saes, "cmd_saes", broken)
    assert run(capsys, "saes", "--key", "4AF5", "--block", "D728", "--no-ledger")[0] == 4
