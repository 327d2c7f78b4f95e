import json
from pathlib import Path

import pytest

from blackwell import library as L
from blackwell.cli import RunConfig, main
from blackwell.serialize import dump_json, spec_to_dict

SPECS = Path(__file__).resolve().parent.parent / "specs"


def run(tmp_path, *args):
    return main(list(args) + ["--out", str(tmp_path)])


def load(path):
    return json.loads(Path(path).read_text())


def test_minmax_four_outcome(tmp_path):
    assert run(tmp_path, "minmax", "--spec", str(SPECS / "four_outcome.json")) == 0
    doc = load(tmp_path / "minmax.json")
    assert doc["schema_version"] == "1"
    assert [p["certificate"]["value_lo"] for p in doc["players"]] == ["0", "0"]


@pytest.mark.parametrize("name,expected", [("pennies_infinitely_often", ["1", "1"]), ("constant", ["1", "1"])])
def test_minmax_values(tmp_path, name, expected):
    assert run(tmp_path, "minmax", "--spec", str(SPECS / f"{name}.json")) == 0
    assert [p["certificate"]["value_hi"] for p in load(tmp_path / "minmax.json")["players"]] == expected


def test_synth_and_verify_pennies(tmp_path):
    spec = str(SPECS / "pennies_frequency.json")
    assert run(tmp_path, "synth", "--spec", spec, "--epsilon", "0.1") == 0
    auto = load(tmp_path / "automaton.json")
    assert auto["payoffs"] == ["1/2", "1/2"]
    assert (tmp_path / "play.json").exists() and (tmp_path / "summary.txt").exists()
    code = run(tmp_path, "verify", "--spec", spec, "--artifact", str(tmp_path / "automaton.json"), "--epsilon", "0.2", "--horizon", "200", "--reps", "50")
    assert code == 0
    rep = load(tmp_path / "verify.json")
    assert rep["passed"] and rep["concentration_check"]["ok"]


def test_synth_four_outcome(tmp_path):
    assert run(tmp_path, "synth", "--spec", str(SPECS / "four_outcome.json"), "--epsilon", "0.1") == 0
    assert load(tmp_path / "automaton.json")["payoffs"] == ["1", "1"]


def test_synth_infeasible(tmp_path):
    assert run(tmp_path, "synth", "--spec", str(SPECS / "zero_sum_horizon.json"), "--epsilon", "0.1") == 3
    doc = load(tmp_path / "infeasible.json")
    assert doc["status"] == "infeasible" and doc["report"]


def test_synth_target_outside(tmp_path):
    assert run(tmp_path, "synth", "--spec", str(SPECS / "four_outcome.json"), "--target", "3,0") == 1


def test_verify_broken_artifact_exit_code(tmp_path):
    from .helpers import broken_four_outcome
    from blackwell.serialize import automaton_to_dict

    spec, auto = broken_four_outcome()
    dump_json(automaton_to_dict(spec, auto), tmp_path / "broken.json")
    code = run(tmp_path, "verify", "--spec", str(SPECS / "four_outcome.json"), "--artifact", str(tmp_path / "broken.json"), "--horizon", "50", "--reps", "10")
    assert code == 2
    assert load(tmp_path / "verify.json")["max_gain"] == "3"


def test_payoff_set_outputs(tmp_path):
    assert run(tmp_path, "payoff-set", "--spec", str(SPECS / "four_outcome.json"), "--epsilon", "0.1") == 0
    doc = load(tmp_path / "payoff_set.json")
    main_hull = [h for h in doc["hulls"] if h["epsilon"] == "1/10"][0]
    assert sorted(map(tuple, main_hull["vertices"])) == [("0", "0"), ("1", "1")]
    rows = (tmp_path / "payoff_set.csv").read_text().splitlines()
    assert rows[0].startswith("epsilon,")
    svg = (tmp_path / "payoff_set.svg").read_text()
    assert 'class="hull"' in svg and "feasible-ir-region" in svg


def test_payoff_set_three_players_skips_svg(tmp_path, capsys):
    assert run(tmp_path, "payoff-set", "--spec", str(SPECS / "three_player.json")) == 0
    assert not (tmp_path / "payoff_set.svg").exists()
    assert "notice" in capsys.readouterr().err


def test_payoff_set_single_point(tmp_path):
    assert run(tmp_path, "payoff-set", "--spec", str(SPECS / "constant.json")) == 0
    doc = load(tmp_path / "payoff_set.json")
    assert all(len(h["vertices"]) == 1 for h in doc["hulls"])


def test_parse_error_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "players": ["1", "2"],\n  "actions": oops\n}\n')
    assert run(tmp_path, "minmax", "--spec", str(bad)) == 5
    assert "bad.json:3:" in capsys.readouterr().err


def test_missing_file_is_parse_error(tmp_path):
    assert run(tmp_path, "minmax", "--spec", str(tmp_path / "nope.json")) == 5


def test_invalid_spec_is_parse_error(tmp_path, capsys):
    doc = spec_to_dict(L.single_target_game())
    doc["objectives"]["1"]["profiles"] = [["X", "L"]]
    path = tmp_path / "invalid.json"
    dump_json(doc, path)
    assert run(tmp_path, "minmax", "--spec", str(path)) == 5
    assert "unknown profile" in capsys.readouterr().err


@pytest.mark.parametrize("flag,value", [("--epsilon", "0"), ("--epsilon", "1.5"), ("--reps", "0"), ("--horizon", "0"), ("--seed", str(2 ** 64)), ("--format", "png")])
def test_run_config_rejects(tmp_path, flag, value):
    assert run(tmp_path, "minmax", "--spec", str(SPECS / "constant.json"), flag, value) == 1


@pytest.mark.parametrize("cmd", ["minmax", "synth", "payoff-set"])
def test_reruns_are_byte_identical(tmp_path, cmd):
    a, b = tmp_path / "a", tmp_path / "b"
    spec = str(SPECS / "four_outcome.json")
    assert main([cmd, "--spec", spec, "--out", str(a)]) == 0
    assert main([cmd, "--spec", spec, "--out", str(b)]) == 0
    files = sorted(p.name for p in a.iterdir())
    assert files == sorted(p.name for p in b.iterdir())
    for name in files:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_epsilon_one_allowed():
    RunConfig("minmax", Path("x"), 1, 1, 1, 0, 8, Path("."), ("json",))
