"""JSON encoding of game specs, automata and reports."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import SpecError
from .model import (
    FiniteHorizon,
    FrequencyCondition,
    GameSpec,
    InfinitelyOften,
    LimsupFrequency,
    MixedProfile,
    PeriodicPlay,
    StrategyAutomaton,
    ThresholdTable,
    to_fraction,
    validate_spec,
)

SCHEMA_VERSION = "1"


def num(x) -> str:
    """Exact rationals are written as strings (``"1/2"``)."""
    return str(Fraction(x)) if isinstance(x, (int, Fraction)) else repr(x)


def _fraction(value, where):
    try:
        return to_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SpecError(f"{where}: expected a number, got {value!r}") from None


def _profile(raw, where) -> tuple:
    if not isinstance(raw, list) or not all(isinstance(a, str) for a in raw):
        raise SpecError(f"{where}: a profile is an array of action labels")
    return tuple(raw)


def _profiles(raw, where) -> frozenset:
    if not isinstance(raw, list):
        raise SpecError(f"{where}: expected an array of profiles")
    return frozenset(_profile(p, f"{where}[{k}]") for k, p in enumerate(raw))


def _objective(raw, where):
    if not isinstance(raw, dict) or "kind" not in raw:
        raise SpecError(f"{where}: objective needs a 'kind' field")
    kind = raw["kind"]
    if kind == "infinitely_often":
        return InfinitelyOften(_profiles(raw.get("profiles", []), f"{where}.profiles"))
    if kind == "limsup_frequency":
        return LimsupFrequency(_profiles(raw.get("profiles", []), f"{where}.profiles"))
    if kind == "threshold_table":
        rules = []
        for k, r in enumerate(raw.get("rules", [])):
            loc = f"{where}.rules[{k}]"
            cond = FrequencyCondition(
                _profiles(r.get("profiles", []), loc + ".profiles"),
                r.get("relation", ""),
                _fraction(r.get("threshold", 0), loc + ".threshold"),
            )
            rules.append((cond, _fraction(r.get("payoff"), loc + ".payoff")))
        return ThresholdTable(tuple(rules), _fraction(raw.get("default", 0), f"{where}.default"))
    if kind == "finite_horizon":
        m = raw.get("horizon")
        if not isinstance(m, int):
            raise SpecError(f"{where}.horizon: expected an integer")
        table = {}
        for k, e in enumerate(raw.get("table", [])):
            loc = f"{where}.table[{k}]"
            hist = e.get("history")
            if not isinstance(hist, list):
                raise SpecError(f"{loc}.history: expected an array of profiles")
            table[tuple(_profile(a, f"{loc}.history") for a in hist)] = _fraction(e.get("payoff"), loc + ".payoff")
        return FiniteHorizon(m, table)
    raise SpecError(f"{where}.kind: unsupported objective kind {kind!r}")


def spec_from_dict(data: dict, *, validate: bool = True) -> GameSpec:
    for key in ("players", "actions", "objectives", "payoff_bounds"):
        if key not in data:
            raise SpecError(f"missing field '{key}'")
    players = data["players"]
    if not isinstance(players, list) or not players:
        raise SpecError("players: expected a nonempty array")
    try:
        actions = tuple(tuple(data["actions"][p]) for p in players)
        objectives = tuple(_objective(data["objectives"][p], f"objectives.{p}") for p in players)
        bounds = tuple(
            (_fraction(data["payoff_bounds"][p][0], f"payoff_bounds.{p}"), _fraction(data["payoff_bounds"][p][1], f"payoff_bounds.{p}"))
            for p in players
        )
    except KeyError as e:
        raise SpecError(f"no entry for player {e.args[0]!r}") from None
    spec = GameSpec(tuple(players), actions, objectives, bounds)
    if validate:
        report = validate_spec(spec)
        if not report.ok:
            raise SpecError(str(report))
    return spec


def load_spec(path) -> GameSpec:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise SpecError(f"{path}:1:1: top level must be an object")
    try:
        return spec_from_dict(data)
    except SpecError as e:
        raise SpecError(f"{path}: {e}") from None


def _objective_dict(obj) -> dict:
    if isinstance(obj, (InfinitelyOften, LimsupFrequency)):
        return {"kind": obj.kind, "profiles": sorted(list(a) for a in obj.U)}
    if isinstance(obj, ThresholdTable):
        return {
            "kind": obj.kind,
            "rules": [
                {"profiles": sorted(list(a) for a in c.profile_set), "relation": c.relation, "threshold": num(c.threshold), "payoff": num(p)}
                for c, p in obj.rules
            ],
            "default": num(obj.default),
        }
    return {
        "kind": obj.kind,
        "horizon": obj.m,
        "table": [{"history": [list(a) for a in h], "payoff": num(v)} for h, v in sorted(obj.table.items())],
    }


def spec_to_dict(spec: GameSpec) -> dict:
    return {
        "players": list(spec.players),
        "actions": {p: list(a) for p, a in zip(spec.players, spec.actions)},
        "objectives": {p: _objective_dict(o) for p, o in zip(spec.players, spec.objectives)},
        "payoff_bounds": {p: [num(lo), num(hi)] for p, (lo, hi) in zip(spec.players, spec.payoff_bounds)},
    }


def play_to_dict(play: PeriodicPlay) -> dict:
    return {"preamble": [list(a) for a in play.preamble], "cycle": [list(a) for a in play.cycle]}


def automaton_to_dict(spec: GameSpec, auto: StrategyAutomaton) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "players": list(spec.players),
        "initial": auto.initial,
        "states": [
            {
                "name": s,
                "emission": auto.emission[s].to_json(spec),
                "transitions": [{"profile": list(a), "next": auto.transition[(s, a)]} for a in spec.profiles],
            }
            for s in auto.states
        ],
    }


def automaton_from_dict(spec: GameSpec, data: dict) -> StrategyAutomaton:
    try:
        states, emission, transition = [], {}, {}
        for st in data["states"]:
            name = st["name"]
            states.append(name)
            dists = {}
            for p, d in st["emission"].items():
                dists[spec.index(p)] = {a: to_fraction(v) for a, v in d.items()}
            emission[name] = MixedProfile(dists)
            for t in st["transitions"]:
                transition[(name, tuple(t["profile"]))] = t["next"]
        auto = StrategyAutomaton(tuple(states), data["initial"], emission, transition)
    except (KeyError, TypeError, ValueError) as e:
        raise SpecError(f"malformed automaton: {e}") from None
    auto.validate(spec)
    return auto


def load_automaton(spec: GameSpec, path) -> StrategyAutomaton:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    return automaton_from_dict(spec, data)


def dump_json(obj, path) -> None:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
