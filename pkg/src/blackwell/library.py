"""Small games used by the tests, scripts and CLI examples."""
from __future__ import annotations

import itertools
from fractions import Fraction

from .model import (
    FiniteHorizon,
    FrequencyCondition,
    GameSpec,
    InfinitelyOften,
    LimsupFrequency,
    ThresholdTable,
)

F = Fraction


def _spec(players, actions, objectives, bounds) -> GameSpec:
    return GameSpec(tuple(players), tuple(tuple(a) for a in actions), tuple(objectives), tuple(bounds))


def four_outcome_game() -> GameSpec:
    """3x3 game with four payoff outcomes decided by liminf frequencies:
    (1,1) if {(T,L),(M,C)} has frequency > 1/2, (4,-1) if (B,L) has
    frequency 1, (-1,4) if (T,R) has frequency 1, (0,0) otherwise."""
    coop = frozenset({("T", "L"), ("M", "C")})
    bl = frozenset({("B", "L")})
    tr = frozenset({("T", "R")})
    conds = (
        FrequencyCondition(coop, "greater", F(1, 2)),
        FrequencyCondition(bl, "equals_one"),
        FrequencyCondition(tr, "equals_one"),
    )
    p1 = ThresholdTable(tuple(zip(conds, (F(1), F(4), F(-1)))), F(0))
    p2 = ThresholdTable(tuple(zip(conds, (F(1), F(-1), F(4)))), F(0))
    return _spec(["1", "2"], [["T", "M", "B"], ["L", "C", "R"]], [p1, p2], [(F(-1), F(4))] * 2)


MATCH = frozenset({("H", "H"), ("T", "T")})
MISMATCH = frozenset({("H", "T"), ("T", "H")})


def pennies_frequency_game() -> GameSpec:
    """Matching pennies where player 1 maximises the frequency of matches
    and player 2 that of mismatches; both stage minmax values are 1/2."""
    return _spec(
        ["1", "2"],
        [["H", "T"], ["H", "T"]],
        [LimsupFrequency(MATCH), LimsupFrequency(MISMATCH)],
        [(F(0), F(1))] * 2,
    )


def pennies_infinitely_often_game() -> GameSpec:
    """Matching pennies where each player wants to win infinitely often."""
    return _spec(
        ["1", "2"],
        [["H", "T"], ["H", "T"]],
        [InfinitelyOften(MATCH), InfinitelyOften(MISMATCH)],
        [(F(0), F(1))] * 2,
    )


def single_target_game() -> GameSpec:
    """2x2 game where player 1 wins only at (T,L); player 2 can avoid it."""
    return _spec(
        ["1", "2"],
        [["T", "B"], ["L", "R"]],
        [InfinitelyOften(frozenset({("T", "L")})), InfinitelyOften(frozenset({("B", "R")}))],
        [(F(0), F(1))] * 2,
    )


def constant_game(values=(F(1), F(1)), actions=(("a", "b"), ("x", "y"))) -> GameSpec:
    """Every player's payoff is a constant (a default-only threshold table)."""
    values = [F(v) for v in values]
    objs = [ThresholdTable((), v) for v in values]
    players = [str(k + 1) for k in range(len(values))]
    return _spec(players, actions[: len(values)], objs, [(v, v) for v in values])


def zero_sum_horizon_game() -> GameSpec:
    """One-shot matching pennies with payoffs +1/-1 read at stage 0.

    Any pure prefix leaves one player at -1 while the stage minmax is 0,
    so no pure play is individually rational."""
    actions = [["H", "T"], ["H", "T"]]
    profiles = list(itertools.product(*actions))
    t1 = {(a,): F(1) if a[0] == a[1] else F(-1) for a in profiles}
    t2 = {h: -v for h, v in t1.items()}
    return _spec(["1", "2"], actions, [FiniteHorizon(1, t1), FiniteHorizon(1, t2)], [(F(-1), F(1))] * 2)


def coordination_horizon_game() -> GameSpec:
    """Two-stage coordination: each player gets 1 for every stage in which
    the actions match, read over the first two stages."""
    actions = [["a", "b"], ["a", "b"]]
    profiles = list(itertools.product(*actions))
    table = {h: F(sum(a[0] == a[1] for a in h)) for h in itertools.product(profiles, repeat=2)}
    return _spec(["1", "2"], actions, [FiniteHorizon(2, table), FiniteHorizon(2, dict(table))], [(F(0), F(2))] * 2)


def solo_game() -> GameSpec:
    """One player, two actions, wins infinitely often at 'w'."""
    return _spec(["1"], [["w", "l"]], [InfinitelyOften(frozenset({("w",)}))], [(F(0), F(1))])


def three_player_game() -> GameSpec:
    """Three players, binary actions; each wants to match the next player's
    action with long-run frequency."""
    actions = [["0", "1"]] * 3
    profiles = list(itertools.product(*actions))
    objs = [LimsupFrequency(frozenset(a for a in profiles if a[i] == a[(i + 1) % 3])) for i in range(3)]
    return _spec(["1", "2", "3"], actions, objs, [(F(0), F(1))] * 3)


GAMES = {
    "four_outcome": four_outcome_game,
    "pennies_frequency": pennies_frequency_game,
    "pennies_infinitely_often": pennies_infinitely_often_game,
    "single_target": single_target_game,
    "constant": constant_game,
    "zero_sum_horizon": zero_sum_horizon_game,
    "coordination_horizon": coordination_horizon_game,
    "solo": solo_game,
    "three_player": three_player_game,
}
