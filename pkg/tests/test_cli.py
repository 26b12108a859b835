import json
import subprocess
import sys
from pathlib import Path

import pytest

from intransitive.cli import DEMOS, main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_demo_efron(capsys):
    code, out, _ = run(capsys, "demo", "efron", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["exit_status"] == 0
    steps = [v for v in rep["verdicts"] if v.get("item", "").startswith("cycle step")]
    assert [v["p_win"] for v in steps] == ["2/3"] * 4
    assert ["blue", "yellow", "red", "green"] in rep["cycles"]


def test_demo_chain_too_short(capsys):
    code, _, err = run(capsys, "demo", "gears-chain-n", "--n", "2")
    assert code == 2 and "ChainTooShort" in err


def test_demo_gears3(capsys):
    code, out, _ = run(capsys, "demo", "gears3", "--format", "json")
    rep = json.loads(out)
    ring = [v for v in rep["verdicts"] if "pair" in v][:3]
    assert [(v["pair"], v["ratio"], v["faster"]) for v in ring] == [
        (["A", "B"], "-2", "A"), (["B", "C"], "-2", "B"), (["C", "A"], "-2", "C")]
    jam = next(v for v in rep["verdicts"] if v.get("item") == "assembly")
    assert jam["jammed"] is True
    assert code == 0


@pytest.mark.parametrize("name", [d for d in DEMOS if d != "gears-chain-n"] + ["gears-chain-n"])
def test_every_demo_finds_cycle(capsys, name):
    code, out, _ = run(capsys, "demo", name)
    assert code == 0 and "cycle: " in out and "cycle: none" not in out


def test_unknown_demo(capsys):
    code, _, err = run(capsys, "demo", "catapult")
    assert code == 2 and "UnknownDemo" in err


def test_bad_option(capsys):
    code, _, err = run(capsys, "demo", "efron", "--n", "4")
    assert code == 2 and "BadOption" in err


def test_decimal_marked(capsys):
    _, out, _ = run(capsys, "demo", "efron", "--decimal")
    assert "2/3 (~0.666667)" in out


def test_reports_are_deterministic(capsys):
    outs = {run(capsys, "demo", "towers", "--format", "json")[1] for _ in range(3)}
    assert len(outs) == 1


@pytest.mark.parametrize("fname,cycle_len", [
    ("efron.json", 4), ("lo_shu_sticks.json", 3), ("condorcet_vote.json", 3),
    ("gears3_pulleys.json", 3), ("towers.json", 3),
])
def test_verify_positive(capsys, fname, cycle_len):
    code, out, _ = run(capsys, "verify", str(DATA / fname), "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert any(len(c) == cycle_len for c in rep["cycles"])


def test_verify_lo_shu_tallies(capsys):
    _, out, _ = run(capsys, "verify", str(DATA / "lo_shu_sticks.json"), "--format", "json")
    rep = json.loads(out)
    assert rep["cycles"] == [["Row1", "Row3", "Row2"]]
    assert sorted((v["wins"], v["losses"]) for v in rep["verdicts"]) == [(4, 5), (4, 5), (5, 4)]


def test_verify_jam_expectation(capsys):
    code, out, _ = run(capsys, "verify", str(DATA / "gears3_jam.json"), "--format", "json")
    assert code == 0
    assert json.loads(out)["verdicts"][-1]["jammed"] is True


def test_verify_unmet_jam_expectation(capsys, tmp_path):
    obj = json.loads((DATA / "gears3_jam.json").read_text())
    obj["adjacent"] = [["A", "B"]]
    f = tmp_path / "pair.json"
    f.write_text(json.dumps(obj))
    code, _, _ = run(capsys, "verify", str(f))
    assert code == 1


def test_verify_one_die(capsys):
    code, _, err = run(capsys, "verify", str(DATA / "one_die.json"))
    assert code == 2 and "TooFewItems" in err


def test_verify_transitive_is_negative(capsys, tmp_path):
    f = tmp_path / "t.json"
    f.write_text(json.dumps({"kind": "dice_set", "items": [
        {"label": "a", "values": [1]}, {"label": "b", "values": [2]}, {"label": "c", "values": [3]}]}))
    assert run(capsys, "verify", str(f))[0] == 1


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"kind": "teapot"}',
                                     '{"kind": "gear_assembly", "shafts": []}',
                                     '{"kind": "dice_set", "items": [{"label": "a", "values": [0.5]}]}'])
def test_verify_parse_errors(capsys, tmp_path, content):
    f = tmp_path / "bad.json"
    f.write_text(content)
    assert run(capsys, "verify", str(f))[0] == 2


def test_verify_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "verify", str(tmp_path / "nope.json"))
    assert code == 2 and "ParseError" in err


def test_verify_copies_option(capsys, tmp_path):
    f = tmp_path / "pair.json"
    f.write_text(json.dumps({"kind": "dice_set", "items": [
        {"label": "a", "values": [2, 2, 5]}, {"label": "b", "values": [1, 4, 4]},
        {"label": "c", "values": [3, 3, 3]}]}))
    _, out, _ = run(capsys, "verify", str(f), "--copies", "2", "--format", "json")
    ab = json.loads(out)["verdicts"][0]
    assert (ab["wins"], ab["ties"], ab["losses"]) == (33, 0, 48)


def test_search_dice_stream(capsys):
    code, out, err = run(capsys, "search", "dice", "--sets", "3", "--faces", "3", "--min", "1", "--max", "6")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and lines and "count=" in err


def test_search_limit(capsys):
    _, out, _ = run(capsys, "search", "dice", "--limit", "2")
    assert len(out.splitlines()) == 2


def test_search_empty(capsys):
    assert run(capsys, "search", "dice", "--min", "5", "--max", "5")[0] == 1
    assert run(capsys, "search", "lane-triples", "--lanes", "1")[0] == 1


def test_search_spec_invalid(capsys):
    code, _, err = run(capsys, "search", "dice", "--sets", "2")
    assert code == 2 and "SpecInvalid" in err


def test_search_lane_triples_contains_towers(capsys):
    _, out, _ = run(capsys, "search", "lane-triples", "--lanes", "3")
    assert "M3 G B1" in [json.loads(x)["code"] for x in out.splitlines()]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "intransitive", "demo", "condorcet-vote"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "cycle: A -> B -> C -> A" in res.stdout
