"""End-to-end runs of every subcommand through dispatch()."""

import csv
import json

import pytest

from turangap import DownSet, downset_to_dict, pattern_to_dict, simple_pattern
from turangap.cli import dispatch

WORKED = {"r": 3, "m": 3, "multisets": [[1, 1, 2], [1, 2, 3]]}


@pytest.fixture
def pattern_file(tmp_path):
    path = tmp_path / "pattern.json"
    path.write_text(json.dumps(WORKED))
    return str(path)


def _artifacts(tmp_path, stem):
    primary = [
        p for p in tmp_path.iterdir()
        if p.name.startswith(stem) and not p.name.endswith(".manifest.json")
    ]
    manifests = sorted(tmp_path.glob(f"{stem}*.manifest.json"))
    return sorted(primary), manifests


def test_lagrangian_csv_and_manifest(tmp_path, pattern_file, capsys):
    code = dispatch(
        ["lagrangian", "--pattern", pattern_file, "--starts", "12",
         "--out", str(tmp_path)]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "value:" in out and "kkt residual" in out

    primaries, manifests = _artifacts(tmp_path, "lagrangian-")
    assert len(primaries) == 1 and len(manifests) == 1
    rows = list(csv.DictReader(primaries[0].open()))
    assert len(rows) == 1
    assert abs(float(rows[0]["value"]) - 4 / 9) < 1e-8
    manifest = json.loads(manifests[0].read_text())
    assert manifest["command"] == "lagrangian"
    assert manifest["outputs"] == [primaries[0].name]
    assert manifest["seed"] == 0


def test_identical_runs_are_byte_identical(tmp_path, pattern_file):
    argv = ["lagrangian", "--pattern", pattern_file, "--starts", "8",
            "--out", str(tmp_path)]
    assert dispatch(argv) == 0
    primaries, _ = _artifacts(tmp_path, "lagrangian-")
    first = primaries[0].read_bytes()
    assert dispatch(argv) == 0
    primaries, manifests = _artifacts(tmp_path, "lagrangian-")
    assert len(primaries) == 1  # same content-addressed name
    assert primaries[0].read_bytes() == first
    # different seed lands at a different address
    assert dispatch(argv + ["--seed", "5"]) == 0
    primaries, _ = _artifacts(tmp_path, "lagrangian-")
    assert len(primaries) == 2


def test_lagrangian_json_format(tmp_path, pattern_file):
    code = dispatch(
        ["lagrangian", "--pattern", pattern_file, "--starts", "8",
         "--format", "json", "--out", str(tmp_path)]
    )
    assert code == 0
    primaries, _ = _artifacts(tmp_path, "lagrangian-")
    cert = json.loads(primaries[0].read_text())
    assert abs(cert["value"] - 4 / 9) < 1e-8
    assert len(cert["point"]) == 3


def test_chain_subcommand(tmp_path, capsys):
    code = dispatch(
        ["chain", "--r", "3", "--m", "5", "--starts", "12",
         "--format", "json", "--out", str(tmp_path)]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "max step" in out
    primaries, _ = _artifacts(tmp_path, "chain-")
    obj = json.loads(primaries[0].read_text())
    assert obj["r"] == 3 and obj["m"] == 5
    assert len(obj["values"]) == 11  # C(5,3) rungs plus the start
    assert obj["gap_ok"] and obj["near_equality_ok"]
    assert obj["max_step"] <= 2 / 9 + 1e-6


def test_chain_requires_m_without_slow(tmp_path):
    assert dispatch(["chain", "--r", "3", "--out", str(tmp_path)]) == 2


def test_ladder_csv_columns(tmp_path, capsys):
    code = dispatch(["ladder", "--r", "3", "--out", str(tmp_path)])
    assert code == 0
    primaries, _ = _artifacts(tmp_path, "ladder-")
    rows = list(csv.DictReader(primaries[0].open()))
    assert [r["composition"] for r in rows] == ["", "1-1-1", "2-1-0", "3-0-0"]
    assert [r["value_num"] for r in rows] == ["0", "2", "8", "1"]
    assert [r["value_den"] for r in rows] == ["1", "9", "9", "1"]
    assert rows[2]["step_num"] == "2" and rows[2]["step_den"] == "3"


def test_ladder_monte_carlo_flag(tmp_path, capsys):
    code = dispatch(
        ["ladder", "--r", "3", "--mc-trials", "20000", "--out", str(tmp_path)]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "worst deviation" in out


def test_max_step_subcommand(tmp_path, capsys):
    code = dispatch(["max-step", "--r", "4", "--format", "json",
                     "--out", str(tmp_path)])
    assert code == 0
    primaries, _ = _artifacts(tmp_path, "max-step-")
    obj = json.loads(primaries[0].read_text())
    assert obj["step"] == "9/16"
    assert obj["composition"] == [2, 1, 1, 0]


def test_lemma_check_all_downsets(tmp_path, capsys):
    code = dispatch(
        ["lemma-check", "--r", "3", "--s", "2", "--all-downsets",
         "--starts", "12", "--out", str(tmp_path)]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    primaries, _ = _artifacts(tmp_path, "lemma-check-")
    rows = list(csv.DictReader(primaries[0].open()))
    assert len(rows) == 3  # chain poset on {(2,1),(3,0)} plus empty family
    assert all(r["status"] == "pass" for r in rows)


def test_lemma_check_single_downset_file(tmp_path):
    down = DownSet.from_generators(3, 2, [(2, 1)])
    path = tmp_path / "down.json"
    path.write_text(json.dumps(downset_to_dict(down)))
    code = dispatch(
        ["lemma-check", "--r", "3", "--s", "2", "--downset", str(path),
         "--starts", "12", "--format", "json", "--out", str(tmp_path)]
    )
    assert code == 0
    primaries, _ = _artifacts(tmp_path, "lemma-check-")
    obj = json.loads(primaries[0].read_text())
    assert len(obj["reports"]) == 1
    assert obj["reports"][0]["passed"]
    assert obj["reports"][0]["uniform_value"] == "3/4"


def test_lemma_check_flag_file_mismatch_is_usage_error(tmp_path, capsys):
    down = DownSet.from_generators(3, 2, [(2, 1)])
    path = tmp_path / "down.json"
    path.write_text(json.dumps(downset_to_dict(down)))
    code = dispatch(
        ["lemma-check", "--r", "4", "--s", "2", "--downset", str(path),
         "--out", str(tmp_path)]
    )
    assert code == 2
    assert "flags say" in capsys.readouterr().err


def test_bunching_integer_and_fraction_h(tmp_path, capsys):
    assert dispatch(["bunching", "--r", "4", "--h", "1",
                     "--out", str(tmp_path)]) == 0
    assert dispatch(["bunching", "--r", "3", "--h", "3/2",
                     "--out", str(tmp_path)]) == 0
    assert dispatch(["bunching", "--r", "3", "--h", "0.5",
                     "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "zero sum: True" in out


def test_bunching_bad_h_is_usage_error(tmp_path, capsys):
    assert dispatch(["bunching", "--r", "4", "--h", "wat",
                     "--out", str(tmp_path)]) == 2
    # off-lattice h raises ValueError inside the library -> usage error
    assert dispatch(["bunching", "--r", "4", "--h", "1/2",
                     "--out", str(tmp_path)]) == 2


def test_bunching_csv_coefficients(tmp_path):
    assert dispatch(["bunching", "--r", "2", "--h", "0",
                     "--out", str(tmp_path)]) == 0
    primaries, _ = _artifacts(tmp_path, "bunching-")
    rows = list(csv.DictReader(primaries[0].open()))
    got = {r["j"]: (r["coeff_num"], r["coeff_den"], r["region"]) for r in rows}
    assert got["-1"] == ("1", "2", "outside")
    assert got["0"] == ("-1", "1", "inside")
    assert got["1"] == ("1", "2", "outside")


def test_blow_up_txt_wire_format(tmp_path, pattern_file, capsys):
    code = dispatch(
        ["blow-up", "--pattern", pattern_file, "--sizes", "2,2,2",
         "--out", str(tmp_path)]
    )
    assert code == 0
    assert "10 edges" in capsys.readouterr().out
    primaries, _ = _artifacts(tmp_path, "blow-up-")
    lines = primaries[0].read_text().splitlines()
    assert len(lines) == 10
    assert lines[0] == "1 2 3"
    for line in lines:
        assert len(line.split()) == 3


def test_blow_up_bad_sizes_is_usage_error(tmp_path, pattern_file, capsys):
    code = dispatch(
        ["blow-up", "--pattern", pattern_file, "--sizes", "2,x,2",
         "--out", str(tmp_path)]
    )
    assert code == 2
    assert "cannot parse" in capsys.readouterr().err


def test_blow_up_wrong_part_count_is_usage_error(tmp_path, pattern_file):
    code = dispatch(
        ["blow-up", "--pattern", pattern_file, "--sizes", "2,2",
         "--out", str(tmp_path)]
    )
    assert code == 2  # BlowupSpec raises ValueError -> usage error


def test_minimal_m_prints_13(tmp_path, capsys):
    code = dispatch(["minimal-m", "--r", "3", "--out", str(tmp_path)])
    assert code == 0
    assert capsys.readouterr().out.splitlines()[0] == "13"
    primaries, _ = _artifacts(tmp_path, "minimal-m-")
    rows = list(csv.DictReader(primaries[0].open()))
    assert rows[0]["m"] == "13"


def test_unknown_command_is_usage_error(capsys):
    assert dispatch(["solve-everything"]) == 2
    assert dispatch([]) == 2


def test_missing_pattern_file_is_usage_error(tmp_path, capsys):
    code = dispatch(
        ["lagrangian", "--pattern", str(tmp_path / "nope.json"),
         "--out", str(tmp_path)]
    )
    assert code == 2
    assert "lagrangian" in capsys.readouterr().err


def test_malformed_pattern_file_is_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code = dispatch(
        ["lagrangian", "--pattern", str(bad), "--out", str(tmp_path)]
    )
    assert code == 2


def test_pattern_roundtrip_through_cli(tmp_path):
    # a pattern serialized by the library is accepted by the CLI
    path = tmp_path / "single.json"
    path.write_text(json.dumps(pattern_to_dict(simple_pattern(3, 3, [(1, 2, 3)]))))
    code = dispatch(
        ["lagrangian", "--pattern", str(path), "--starts", "8",
         "--format", "json", "--out", str(tmp_path)]
    )
    assert code == 0
    primaries, _ = _artifacts(tmp_path, "lagrangian-")
    cert = json.loads(primaries[0].read_text())
    assert abs(cert["value"] - 6 / 27) < 1e-9
