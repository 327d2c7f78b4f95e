from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from blackwell import library as L
from blackwell.chain import (
    ProductChain,
    absorption_probabilities,
    exact_payoffs,
    mass_outside,
    payoff_distribution,
    recurrent_classes,
    stationary_distribution,
)
from blackwell.equilibrium import folk_equilibrium, synthesize_equilibrium
from blackwell.model import MixedProfile, StrategyAutomaton
from blackwell.values import stage_guarantee_strategy
from blackwell.stage import indicator_reward

from .helpers import biased_lottery_four_outcome, stationary


def test_two_state_stationary_distribution():
    kernel = {"a": {"a": F(1, 2), "b": F(1, 2)}, "b": {"a": F(1, 3), "b": F(2, 3)}}
    pi = stationary_distribution(["a", "b"], kernel)
    assert pi == {"a": F(2, 5), "b": F(3, 5)}


def test_absorbing_chain():
    kernel = {"s": {"s": F(1, 2), "x": F(1, 4), "y": F(1, 4)}, "x": {"x": 1}, "y": {"y": 1}}
    classes = recurrent_classes(["s", "x", "y"], kernel)
    assert sorted(map(sorted, classes)) == [["x"], ["y"]]
    probs = absorption_probabilities(["s", "x", "y"], kernel, classes)
    assert sorted(probs["s"]) == [F(1, 2), F(1, 2)]


def test_grim_trigger_pennies_payoff():
    spec = L.pennies_frequency_game()
    art = synthesize_equilibrium(spec, F(1, 10))
    assert exact_payoffs(spec, art.automaton) == (F(1, 2), F(1, 2))


def test_uniform_iid_infinitely_often():
    spec = L.pennies_infinitely_often_game()
    auto = stationary(spec, MixedProfile.uniform(spec, [0, 1]))
    assert exact_payoffs(spec, auto) == (1, 1)


def test_lottery_mixture_payoff():
    spec = L.four_outcome_game()
    art = folk_equilibrium(spec, (F(1, 2), F(1, 2)), F(1, 10))
    assert exact_payoffs(spec, art.automaton) == (F(1, 2), F(1, 2))
    dist = payoff_distribution(spec, art.automaton)
    assert sorted(v for _, v in dist) == [(0, 0), (1, 1)]
    assert all(p == F(1, 2) for p, _ in dist)


def test_biased_lottery_distribution():
    spec, art = biased_lottery_four_outcome()
    dist = dict((v, p) for p, v in payoff_distribution(spec, art.automaton))
    assert dist == {(1, 1): F(341, 1024), (4, -1): F(683, 1024)}
    assert mass_outside(spec, art.automaton, (0, 0)) == F(683, 1024)


def test_finite_horizon_forward_expectation():
    spec = L.coordination_horizon_game()
    auto = stationary(spec, MixedProfile.uniform(spec, [0, 1]))
    assert exact_payoffs(spec, auto) == (1, 1)  # two stages, each matches w.p. 1/2


@pytest.mark.parametrize("name", sorted(L.GAMES))
def test_uniform_chain_checks(name):
    spec = L.GAMES[name]()
    chain = ProductChain.build(spec, stationary(spec, MixedProfile.uniform(spec, range(spec.n))))
    chain.check()
    for k, pi in enumerate(chain.stationary):
        assert sum(pi.values()) == 1 and all(v >= 0 for v in pi.values())


def _random_automaton(spec, data):
    k = data.draw(st.integers(1, 4))
    names = [f"q{j}" for j in range(k)]
    emission = {}
    for s in names:
        dists = {}
        for j in range(spec.n):
            w = data.draw(st.lists(st.integers(0, 3), min_size=len(spec.actions[j]), max_size=len(spec.actions[j])))
            if sum(w) == 0:
                w[0] = 1
            dists[j] = {a: F(x, sum(w)) for a, x in zip(spec.actions[j], w) if x}
        emission[s] = MixedProfile(dists)
    transition = {(s, a): names[data.draw(st.integers(0, k - 1))] for s in names for a in spec.profiles}
    return StrategyAutomaton(tuple(names), names[0], emission, transition)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_random_chains_are_stochastic_and_stationary(data):
    spec = L.pennies_frequency_game()
    chain = ProductChain.build(spec, _random_automaton(spec, data))
    chain.check()
    for s, row in chain.kernel.items():
        assert sum(row.values()) == 1
    for cls, pi in zip(chain.classes, chain.stationary):
        for t in cls:
            assert sum(pi[s] * chain.kernel[s].get(t, 0) for s in cls) == pi[t]
    dist = payoff_distribution(spec, chain.automaton)
    assert sum(p for p, _ in dist) == 1


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_guaranteeing_strategy_secures_value(data):
    """Matching vs mismatching infinitely often: the player mixing uniformly
    wins infinitely often whatever stationary plan the opponent runs."""
    spec = L.pennies_infinitely_often_game()
    i = data.draw(st.integers(0, 1))
    guard = stage_guarantee_strategy(spec, i, indicator_reward(spec, i, spec.objectives[i].U))
    other = _random_automaton(spec, data)
    em = {s: MixedProfile({**{j: d for j, d in m.dists.items() if j != i}, **guard.dists}) for s, m in other.emission.items()}
    auto = StrategyAutomaton(other.states, other.initial, em, other.transition)
    assert exact_payoffs(spec, auto)[i] >= 1
