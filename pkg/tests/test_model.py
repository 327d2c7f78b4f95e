from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from blackwell import library as L
from blackwell.errors import InvalidPlayError, PreconditionError
from blackwell.model import (
    FiniteHorizon,
    FrequencyCondition,
    GameSpec,
    InfinitelyOften,
    LimsupFrequency,
    MixedProfile,
    PeriodicPlay,
    StrategyAutomaton,
    ThresholdTable,
    evaluate_periodic,
    frequency_vector,
    payoff_vector,
    to_fraction,
    validate_spec,
)

TL, BR = ("T", "L"), ("B", "R")


def small_spec(obj1, obj2=None):
    obj2 = obj2 or InfinitelyOften(frozenset({BR}))
    return GameSpec(("1", "2"), (("T", "B"), ("L", "R")), (obj1, obj2), ((F(0), F(1)), (F(0), F(1))))


def test_minimal_spec_is_valid():
    assert validate_spec(small_spec(InfinitelyOften(frozenset({TL})))).ok


def test_unknown_profile_reported():
    bad = ThresholdTable(((FrequencyCondition(frozenset({("X", "L")}), "greater", F(1, 2)), F(1)),), F(0))
    report = validate_spec(small_spec(bad))
    assert not report.ok
    assert any("unknown profile" in msg for _, msg in report.issues)
    assert report.issues[0][0].startswith("objectives.1")


def test_missing_table_entry_reported():
    profiles = [(a, b) for a in "TB" for b in "LR"]
    table = {(a,): F(1) for a in profiles[:-1]}
    report = validate_spec(small_spec(FiniteHorizon(1, table)))
    assert any("table not total" in msg for _, msg in report.issues)


def test_bounds_must_contain_range():
    tt = ThresholdTable((), F(3))
    report = validate_spec(small_spec(tt))
    assert any(loc == "payoff_bounds.1" for loc, _ in report.issues)


def test_empty_condition_set_and_threshold_range():
    tt = ThresholdTable(((FrequencyCondition(frozenset(), "at_least", F(2)), F(1)),), F(0))
    msgs = [m for _, m in validate_spec(small_spec(tt)).issues]
    assert any("empty profile set" in m for m in msgs)
    assert any("threshold" in m for m in msgs)


def test_limsup_half_cycle():
    obj = LimsupFrequency(L.MATCH)
    assert evaluate_periodic(obj, PeriodicPlay((), (("H", "H"), ("H", "T")))) == F(1, 2)


def test_four_outcome_on_bl_cycle():
    spec = L.four_outcome_game()
    assert payoff_vector(spec, PeriodicPlay((), (("B", "L"),))) == (4, -1)
    assert payoff_vector(spec, PeriodicPlay((), (("T", "R"),))) == (-1, 4)
    assert payoff_vector(spec, PeriodicPlay((), (("T", "L"),))) == (1, 1)
    # exactly one half is not enough for the coordination rule
    assert payoff_vector(spec, PeriodicPlay((), (("T", "L"), ("B", "C")))) == (0, 0)


@pytest.mark.parametrize("m1,m2", [(1, 1), (2, 3), (4, 1), (5, 5)])
def test_two_profile_periodic_play(m1, m2):
    spec = L.pennies_frequency_game()
    play = PeriodicPlay((), (("H", "H"),) * m1 + (("H", "T"),) * m2)
    assert payoff_vector(spec, play) == (F(m1, m1 + m2), F(m2, m1 + m2))


def test_frequency_vector_examples():
    assert frequency_vector(PeriodicPlay((), (TL,))) == {TL: 1}
    assert frequency_vector(PeriodicPlay((), (TL, BR))) == {TL: F(1, 2), BR: F(1, 2)}
    assert frequency_vector(PeriodicPlay((), (TL, TL, BR))) == {TL: F(2, 3), BR: F(1, 3)}


def test_invalid_profile_rejected():
    spec = L.pennies_frequency_game()
    with pytest.raises(InvalidPlayError):
        payoff_vector(spec, PeriodicPlay((), (("H", "X"),)))
    with pytest.raises(InvalidPlayError):
        evaluate_periodic(spec.objectives[0], PeriodicPlay((), (("Q", "H"),)), spec)


def test_empty_cycle_rejected():
    with pytest.raises(PreconditionError):
        PeriodicPlay((), ())


def test_finite_horizon_reads_prefix():
    spec = L.coordination_horizon_game()
    play = PeriodicPlay((("a", "b"),), (("a", "a"),))
    assert payoff_vector(spec, play) == (1, 1)


def test_to_fraction_uses_decimal_repr():
    assert to_fraction(0.1) == F(1, 10)
    assert to_fraction("2/3") == F(2, 3)


def test_mixed_profile_validation():
    spec = L.pennies_frequency_game()
    MixedProfile({0: {"H": 0.5, "T": 0.5}}).validate(spec, [0])
    with pytest.raises(PreconditionError):
        MixedProfile({0: {"H": 0.5, "T": 0.6}}).validate(spec, [0])
    with pytest.raises(PreconditionError):
        MixedProfile({0: {"X": 1}}).validate(spec, [0])


def test_automaton_validation_requires_totality():
    spec = L.pennies_frequency_game()
    em = {"s": MixedProfile.pure({0: "H", 1: "H"})}
    with pytest.raises(PreconditionError):
        StrategyAutomaton(("s",), "s", em, {("s", ("H", "H")): "s"}).validate(spec)
    auto = StrategyAutomaton(("s",), "s", em, {("s", a): "s" for a in spec.profiles})
    auto.validate(spec)
    assert auto.reachable(spec) == ["s"]


# ---------------------------------------------------------------- properties

PROFILES_3x3 = L.four_outcome_game().profiles
profile = st.sampled_from(PROFILES_3x3)
cycles = st.lists(profile, min_size=1, max_size=12)
preambles = st.lists(profile, max_size=5)


@given(preambles, cycles)
def test_frequencies_sum_to_one(pre, cyc):
    f = frequency_vector(PeriodicPlay(tuple(pre), tuple(cyc)))
    assert sum(f.values()) == 1
    assert all(isinstance(v, F) for v in f.values())


@given(preambles, cycles, st.integers(0, 11))
def test_tail_payoffs_invariant_under_rotation_and_doubling(pre, cyc, k):
    spec = L.four_outcome_game()
    base = payoff_vector(spec, PeriodicPlay(tuple(pre), tuple(cyc)))
    k %= len(cyc)
    rotated = tuple(cyc[k:] + cyc[:k])
    assert payoff_vector(spec, PeriodicPlay(tuple(pre), rotated)) == base
    assert payoff_vector(spec, PeriodicPlay(tuple(pre), tuple(cyc) * 2)) == base
    assert payoff_vector(spec, PeriodicPlay((), tuple(cyc))) == base


@given(preambles, cycles, st.sets(profile, max_size=9))
def test_infinitely_often_is_zero_one(pre, cyc, U):
    v = evaluate_periodic(InfinitelyOften(frozenset(U)), PeriodicPlay(tuple(pre), tuple(cyc)))
    assert v in (0, 1)
    assert v == int(bool(set(cyc) & U))


pennies = [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")]


@given(st.lists(st.sampled_from(pennies), min_size=2, max_size=2), st.lists(st.sampled_from(pennies), max_size=4), st.lists(st.sampled_from(pennies), min_size=1, max_size=4))
def test_finite_horizon_ignores_suffix(prefix, suffix, cyc):
    obj = L.coordination_horizon_game().objectives[0]
    a = evaluate_periodic(obj, PeriodicPlay(tuple(prefix), tuple(cyc)))
    b = evaluate_periodic(obj, PeriodicPlay(tuple(prefix) + tuple(suffix), (("a", "b"),)))
    assert a == b
