"""Small automata shared by several test modules."""
from fractions import Fraction as F

from blackwell import library as L
from blackwell.equilibrium import grim_trigger, lottery_artifact
from blackwell.model import MixedProfile, PeriodicPlay, StrategyAutomaton


def stationary(spec, mixed: MixedProfile) -> StrategyAutomaton:
    """One-state automaton repeating ``mixed`` forever."""
    return StrategyAutomaton(("s",), "s", {"s": mixed}, {("s", a): "s" for a in spec.profiles})


def broken_four_outcome():
    """(T,L) forever, but player 2 'punishes' player 1 with L, which lets
    player 1 switch to B and collect 4."""
    spec = L.four_outcome_game()
    puns = [MixedProfile.pure({1: "L"}), MixedProfile.pure({0: "B"})]
    return spec, grim_trigger(spec, PeriodicPlay((), (("T", "L"),)), puns)


def uniform_punished_four_outcome():
    spec = L.four_outcome_game()
    puns = [MixedProfile.uniform(spec, [1]), MixedProfile.pure({0: "B"})]
    return spec, grim_trigger(spec, PeriodicPlay((), (("T", "L"),)), puns)


def biased_lottery_four_outcome():
    """Lottery putting 683/1024 on the (4,-1) play and the rest on (T,L)
    forever; player 2 prefers to wreck the (B,L) play."""
    spec = L.four_outcome_game()
    plays = [PeriodicPlay((), (("T", "L"),)), PeriodicPlay((), (("B", "L"),))]
    art = lottery_artifact(spec, plays, [F(1, 3), F(2, 3)], 10)
    return spec, art
