"""Command-line behaviour: exit codes, determinism, output files."""

import json

import pytest

from hopflax.characters import character_to_json
from hopflax.cli import main
from hopflax.forest import all_trees
from hopflax.toy import ToyConfig, toy_character


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("cmd", ["enumerate", "coproduct", "normal-coords", "birkhoff", "beta",
                                 "renormalized", "lax-run", "toy-table", "locality"])
def test_commands_succeed(capsys, cmd):
    code, out, _ = run(capsys, cmd, "--degree", "3")
    assert code == 0 and out


def test_json_output_is_deterministic(capsys):
    _, a, _ = run(capsys, "lax-run", "--kind", "chi", "--degree", "3", "--format", "json")
    _, b, _ = run(capsys, "lax-run", "--kind", "chi", "--degree", "3", "--format", "json")
    assert a == b
    data = json.loads(a)
    assert data["kind"] == "chi"
    assert a == json.dumps(data, sort_keys=True, indent=2) + "\n"


def test_verify_hopf_exit_zero(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "hopf", "--degree", "5")
    assert code == 0
    assert "FAIL" not in out


def test_resource_cap_exit_two(capsys):
    code, _, err = run(capsys, "enumerate", "--degree", "40")
    assert code == 2 and "ResourceCap" in err


def test_bad_kind_exit_two(capsys):
    code, _, err = run(capsys, "lax-run", "--kind", "omega")
    assert code == 2 and "kind" in err


def test_missing_character_file(capsys, tmp_path):
    code, _, _ = run(capsys, "birkhoff", "--character", str(tmp_path / "nope.json"))
    assert code == 2


def test_character_file_and_out(capsys, tmp_path):
    phi = toy_character(ToyConfig(trunc=3, max_degree=3))
    src = tmp_path / "phi.json"
    src.write_text(json.dumps(character_to_json(phi, all_trees(3))))
    dst = tmp_path / "minus.json"
    code, _, _ = run(capsys, "birkhoff", "--character", str(src), "--degree", "3", "--format", "json",
                     "--out", str(dst))
    assert code == 0
    data = json.loads(dst.read_text())
    assert data["minus"][0]["label"] == "f1"


def test_locality_report_names_witnesses(capsys):
    code, out, _ = run(capsys, "locality", "--kind", "chi", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["is_local"] is False
    assert {w["forest"] for w in data["witnesses"]} == {"f6", "f7", "f8"}


def test_reproduce_reports_diffs(capsys):
    code, out, _ = run(capsys, "reproduce-tables", "--format", "json")
    data = json.loads(out)
    bad = {k: v["mismatches"] for k, v in data["quantities"].items() if v["mismatches"]}
    # exit status follows the diff
    assert code == (1 if bad else 0)
    assert all(data["normal_coordinates"].values())
