from fractions import Fraction as F

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from blackwell import library as L
from blackwell.config import SolverConfig
from blackwell.deviation import (
    DeviationClass,
    best_deviation_value,
    deviation_gain,
    policy_enumeration,
    verify_equilibrium,
)
from blackwell.equilibrium import synthesize_equilibrium
from blackwell.errors import ResourceError
from blackwell.model import MixedProfile, StrategyAutomaton

from .helpers import biased_lottery_four_outcome, broken_four_outcome, stationary, uniform_punished_four_outcome
from .test_chain import _random_automaton


def test_pennies_grim_trigger_gain_within_two_epsilon():
    spec = L.pennies_frequency_game()
    art = synthesize_equilibrium(spec, F(1, 10))
    for i in range(2):
        rep = deviation_gain(spec, art.automaton, i)
        assert rep.gain <= F(1, 5)
        assert rep.gain == 0


def test_four_outcome_no_gain():
    spec = L.four_outcome_game()
    art = synthesize_equilibrium(spec, F(1, 10))
    for i in range(2):
        assert deviation_gain(spec, art.automaton, i).gain <= 0
        assert deviation_gain(spec, art.automaton, i, method="policy_enum").gain <= 0


def test_broken_punishment_found_by_both_routes():
    spec, auto = broken_four_outcome()
    exact = deviation_gain(spec, auto, 0)
    brute = deviation_gain(spec, auto, 0, method="policy_enum")
    assert exact.gain == brute.gain == 3
    assert deviation_gain(spec, auto, 1).gain == 0


def test_biased_lottery_gain_for_player_two():
    spec, art = biased_lottery_four_outcome()
    rep = deviation_gain(spec, art.automaton, 1)
    assert rep.gain == F(683, 1024)
    assert rep.gain >= F(2, 3) - F(1, 20)


def test_finite_horizon_deviation():
    spec = L.coordination_horizon_game()
    art = synthesize_equilibrium(spec, F(1, 10))
    assert all(deviation_gain(spec, art.automaton, i).gain <= 0 for i in range(2))
    # against an i.i.d. uniform opponent nothing beats 1
    auto = stationary(spec, MixedProfile.uniform(spec, [0, 1]))
    assert best_deviation_value(spec, auto, 0)[0] == 1


def test_unknown_method():
    spec, auto = broken_four_outcome()
    with pytest.raises(ValueError):
        deviation_gain(spec, auto, 0, method="guess")


def test_policy_enumeration_cap():
    spec, auto = broken_four_outcome()
    with pytest.raises(ResourceError):
        policy_enumeration(spec, auto, 0, DeviationClass(memory=3, horizon=3), SolverConfig(policy_enum_cap=10))


@pytest.mark.parametrize("name", ["pennies_frequency", "pennies_infinitely_often", "four_outcome"])
def test_deviation_class_monotone(name):
    spec = L.GAMES[name]()
    auto = synthesize_equilibrium(spec, F(1, 10)).automaton
    if name == "four_outcome":
        spec, auto = broken_four_outcome()
    small = policy_enumeration(spec, auto, 0, DeviationClass(1, 0))[0]
    clock = policy_enumeration(spec, auto, 0, DeviationClass(1, 1))[0]
    exact = best_deviation_value(spec, auto, 0)[0]
    assert small <= clock <= exact


def test_memory_monotone_on_stationary_opponent():
    spec = L.pennies_frequency_game()
    auto = stationary(spec, MixedProfile({0: {"H": F(1, 2), "T": F(1, 2)}, 1: {"H": F(1, 3), "T": F(2, 3)}}))
    one = policy_enumeration(spec, auto, 0, DeviationClass(1, 0))[0]
    two = policy_enumeration(spec, auto, 0, DeviationClass(2, 1))[0]
    assert one <= two == F(2, 3)


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.data())
def test_routes_agree_on_random_automata(data):
    name = data.draw(st.sampled_from(["pennies_frequency", "pennies_infinitely_often"]))
    spec = L.GAMES[name]()
    auto = _random_automaton(spec, data)
    i = data.draw(st.integers(0, 1))
    pi = best_deviation_value(spec, auto, i, route="policy_iteration")[0]
    lp = best_deviation_value(spec, auto, i, route="lp")[0]
    enum = policy_enumeration(spec, auto, i, DeviationClass(1, 0))[0]
    assert pi == lp == enum


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.data())
def test_threshold_enumeration_below_exact(data):
    spec = L.four_outcome_game()
    auto = _random_automaton(spec, data)
    i = data.draw(st.integers(0, 1))
    exact = best_deviation_value(spec, auto, i)[0]
    enum = policy_enumeration(spec, auto, i, DeviationClass(1, 0), SolverConfig(policy_enum_cap=10**4))[0] if 3 ** len(auto.states) <= 10**4 else exact
    assert enum <= exact


# ---------------------------------------------------------------- verification


def test_verify_pennies_at_two_epsilon():
    spec = L.pennies_frequency_game()
    art = synthesize_equilibrium(spec, F(1, 10))
    rep = verify_equilibrium(spec, art, F(1, 5))
    assert rep.passed and rep.concentration_ok


def test_verify_four_outcome_at_zero():
    spec = L.four_outcome_game()
    art = synthesize_equilibrium(spec, F(1, 10))
    rep = verify_equilibrium(spec, art, 1e-6)
    assert rep.passed and rep.max_gain == 0
    assert verify_equilibrium(spec, art, 0).passed


def test_verify_broken_artifact_fails():
    spec, auto = broken_four_outcome()
    rep = verify_equilibrium(spec, auto, F(1, 10))
    assert not rep.passed and rep.max_gain == 3
    assert rep.to_json(spec)["passed"] is False


def test_uniform_punishment_still_deters():
    spec, auto = uniform_punished_four_outcome()
    assert verify_equilibrium(spec, auto, F(1, 100)).passed


def test_concentration_check_on_biased_lottery():
    spec, art = biased_lottery_four_outcome()
    rep = verify_equilibrium(spec, art, F(1, 10))
    assert not rep.passed
    assert rep.concentration_mass == F(683, 1024)
    assert rep.concentration_ok  # 683/1024 < 2 * 0.1^(1/3)
