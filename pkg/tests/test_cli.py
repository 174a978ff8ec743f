import json
import subprocess
import sys

from designforge.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------


def test_construct_szekeres_q11(capsys):
    code, out, _ = run_cli(["construct", "szekeres", "--q", "11"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["group"] == {"moduli": [5]}
    assert data["declared"]["mu"] == 1
    assert data["declared"]["K"] == [2, 2]


def test_construct_gr4_ddf_defaults(capsys):
    code, out, _ = run_cli(["construct", "gr4-ddf", "--n", "3"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["group"] == {"moduli": [7, 2, 2]}
    assert data["declared"] == {"K": [12, 12], "lambda": 8, "mu": 10}
    assert data["provenance"]["u"] == 3 and data["provenance"]["y"] == 2


def test_construct_rejects_non_prime_power(capsys):
    code, _, err = run_cli(["construct", "prop22", "--q", "6", "--e", "2"], capsys)
    assert code == 2
    assert "not a prime power" in err


def test_construct_rejects_bad_diophantine(capsys):
    code, _, err = run_cli(["construct", "prop22", "--q", "13", "--e", "4"], capsys)
    assert code == 2
    assert "1 + 4t^2" in err


def test_construct_prop23_and_prop34(capsys):
    code, out, _ = run_cli(["construct", "prop23", "--q", "109", "--e", "4"], capsys)
    assert code == 0
    assert json.loads(out)["declared"]["K"] == [6, 7, 7, 7]
    code, out, _ = run_cli(["construct", "prop34", "--n", "4"], capsys)
    assert code == 0
    assert json.loads(out)["declared"] == {"K": [7], "lambda": None, "mu": 3}


def test_construct_gr4_union(capsys):
    code, out, _ = run_cli(["construct", "gr4-union", "--n", "3"], capsys)
    assert code == 0
    assert json.loads(out)["declared"] == {"K": [16, 16], "lambda": 16, "mu": 18}


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_roundtrip(tmp_path, capsys):
    path = tmp_path / "fam.json"
    code, out, _ = run_cli(
        ["construct", "szekeres", "--q", "11", "--out", str(path)], capsys
    )
    assert code == 0
    code, out, _ = run_cli(["verify", str(path)], capsys)
    assert code == 0
    assert "VERIFIED" in out


def test_verify_corrupted_family_exits_one(tmp_path, capsys):
    path = tmp_path / "fam.json"
    run_cli(["construct", "szekeres", "--q", "11", "--out", str(path)], capsys)
    data = json.loads(path.read_text())
    data["blocks"][0][0] = [0]  # inject the identity: counts break
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run_cli(["verify", str(bad)], capsys)
    assert code == 1
    assert "FAILED" in out and "witness" in out


def test_verify_missing_file_exits_two(capsys):
    code, _, err = run_cli(["verify", "/nonexistent/family.json"], capsys)
    assert code == 2


# ---------------------------------------------------------------------------
# hadamard
# ---------------------------------------------------------------------------


def test_hadamard_sylvester_text(capsys):
    code, out, _ = run_cli(
        ["hadamard", "sylvester", "--k", "2", "--format", "text"], capsys
    )
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "++++"
    assert len(rows) == 4


def test_hadamard_skew_q7(capsys):
    code, out, _ = run_cli(["hadamard", "skew", "--q", "7"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["order"] == 8


def test_hadamard_symmetric_from_file(tmp_path, capsys):
    fam = tmp_path / "fam.json"
    run_cli(["construct", "gr4-ddf", "--n", "3", "--out", str(fam)], capsys)
    code, out, _ = run_cli(["hadamard", "symmetric", "--family", str(fam)], capsys)
    assert code == 0
    assert json.loads(out)["order"] == 64


def test_hadamard_symmetric_needs_input(capsys):
    code, _, err = run_cli(["hadamard", "symmetric"], capsys)
    assert code == 2
    assert "--n or --family" in err


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------


def z6_spec_file(tmp_path):
    spec = {
        "group": {"moduli": [6]},
        "forbidden": [[0], [3]],
        "m": 4,
        "mode": "exhaustive",
        "seed": 0,
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    return path


def test_search_z6(tmp_path, capsys):
    code, out, _ = run_cli(["search", str(z6_spec_file(tmp_path))], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    summary = json.loads(lines[-1])["summary"]
    assert summary["certificates"] == 4
    assert summary["orbits"] == 1
    assert len(lines) == 5


def test_search_infeasible_spec(tmp_path, capsys):
    spec = {
        "group": {"moduli": [15]},
        "forbidden": [[0], [5], [10]],
        "m": 6,
        "mode": "exhaustive",
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    code, _, err = run_cli(["search", str(path)], capsys)
    assert code == 2
    assert "infeasible" in err


def test_search_seeded_runs_identical(tmp_path, capsys):
    spec = {
        "group": {"moduli": [6]},
        "forbidden": [[0], [3]],
        "m": 4,
        "mode": "randomized",
        "budget": {"max_nodes": 1500},
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    _, out1, _ = run_cli(["search", str(path), "--seed", "9"], capsys)
    _, out2, _ = run_cli(["search", str(path), "--seed", "9"], capsys)
    assert out1 == out2


def test_construct_deterministic_output(capsys):
    _, out1, _ = run_cli(["construct", "gr4-ddf", "--n", "3"], capsys)
    _, out2, _ = run_cli(["construct", "gr4-ddf", "--n", "3"], capsys)
    assert out1 == out2


def test_poly_table_env_override(tmp_path, capsys, monkeypatch):
    table = tmp_path / "table.json"
    table.write_text(json.dumps({"2,3": [1, 1, 0, 1]}))  # x^3 + x + 1
    monkeypatch.setenv("DESIGNFORGE_POLY_TABLE", str(table))
    # q=7 ignores the (2,3) entry; a GF(8) use would pick it up, so just
    # prove the table file is read and a bad path fails loudly
    code, _, _ = run_cli(["construct", "szekeres", "--q", "7"], capsys)
    assert code == 0
    monkeypatch.setenv("DESIGNFORGE_POLY_TABLE", str(tmp_path / "missing.json"))
    code, _, err = run_cli(["construct", "szekeres", "--q", "7"], capsys)
    assert code == 2 and "does not exist" in err


# ---------------------------------------------------------------------------
# installed entry point
# ---------------------------------------------------------------------------


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "designforge.cli", "construct", "szekeres", "--q", "7"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["group"] == {"moduli": [3]}
