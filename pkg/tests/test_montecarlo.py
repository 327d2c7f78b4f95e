from fractions import Fraction as F

import numpy as np
import pytest

from blackwell import library as L
from blackwell.chain import exact_payoffs
from blackwell.equilibrium import folk_equilibrium, synthesize_equilibrium
from blackwell.model import MixedProfile
from blackwell.montecarlo import block_win_probability, monte_carlo, simulate
from blackwell.values import closed_block_approximation

from .helpers import stationary


def test_deterministic_cycle_has_zero_variance():
    spec = L.pennies_frequency_game()
    art = synthesize_equilibrium(spec, F(1, 10))
    res = monte_carlo(spec, art.automaton, 100, 20, 1)
    assert np.all(res.stderr == 0)
    assert np.allclose(res.mean, [0.5, 0.5])


def test_seed_determinism_and_thread_independence(monkeypatch):
    spec = L.pennies_frequency_game()
    auto = stationary(spec, MixedProfile.uniform(spec, [0, 1]))
    monkeypatch.setenv("BLACKWELL_THREADS", "1")
    a, _ = simulate(spec, auto, 200, 37, 11)
    monkeypatch.setenv("BLACKWELL_THREADS", "4")
    b, _ = simulate(spec, auto, 200, 37, 11)
    assert np.array_equal(a, b)
    c, _ = simulate(spec, auto, 200, 37, 12)
    assert not np.array_equal(a, c)


def test_prefix_of_replications_is_stable():
    spec = L.pennies_frequency_game()
    auto = stationary(spec, MixedProfile.uniform(spec, [0, 1]))
    a, _ = simulate(spec, auto, 50, 10, 3)
    b, _ = simulate(spec, auto, 50, 20, 3)
    assert np.array_equal(a, b[:10])


@pytest.mark.parametrize("case", ["pennies_iid", "folk_lottery", "coordination_iid", "biased"])
def test_within_four_standard_errors_of_exact(case):
    if case == "pennies_iid":
        spec = L.pennies_frequency_game()
        auto = stationary(spec, MixedProfile({0: {"H": F(1, 4), "T": F(3, 4)}, 1: MixedProfile.uniform(spec, [1]).dists[1]}))
    elif case == "folk_lottery":
        spec = L.four_outcome_game()
        auto = folk_equilibrium(spec, (F(1, 2), F(1, 2)), F(1, 10)).automaton
    elif case == "coordination_iid":
        spec = L.coordination_horizon_game()
        auto = stationary(spec, MixedProfile({0: {"a": F(1, 3), "b": F(2, 3)}, 1: {"a": F(1, 2), "b": F(1, 2)}}))
    else:
        spec = L.pennies_frequency_game()
        auto = stationary(spec, MixedProfile({0: {"H": F(1, 10), "T": F(9, 10)}, 1: {"H": F(1)}}))
    exact = np.array([float(v) for v in exact_payoffs(spec, auto)])
    res = monte_carlo(spec, auto, 400, 400, 7)
    tol = 4 * np.maximum(res.stderr, 1e-3)
    assert np.all(np.abs(res.mean - exact) <= tol)


def test_infinitely_often_proxy_is_labelled():
    spec = L.pennies_infinitely_often_game()
    res = monte_carlo(spec, stationary(spec, MixedProfile.uniform(spec, [0, 1])), 20, 5, 0)
    assert all("proxy" in lab for lab in res.labels)
    assert res.to_json(spec)["players"][0]["estimator"].startswith("proxy")


def test_bad_arguments():
    spec = L.pennies_frequency_game()
    auto = stationary(spec, MixedProfile.uniform(spec, [0, 1]))
    with pytest.raises(ValueError):
        simulate(spec, auto, 0, 5, 0)
    with pytest.raises(ValueError):
        simulate(spec, auto, 5, 0, 0)


def test_block_schedule_win_probability():
    spec = L.pennies_infinitely_often_game()
    eps = F(1, 10)
    sched = closed_block_approximation(spec, 0, eps)
    pun = MixedProfile.uniform(spec, [1])
    p, se = block_win_probability(spec, sched, sched.response, pun, 5, 2000, 5)
    assert p >= 1 - float(eps) - 3 * se
