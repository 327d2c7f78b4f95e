"""Domain types for finite-action Blackwell games and exact evaluation of
eventually periodic plays.

Action profiles are tuples of action labels in player order.  Every payoff
and frequency computed here is a :class:`fractions.Fraction`; floats only
enter through user input and are converted on the way in.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import InvalidPlayError, PreconditionError

Profile = tuple[str, ...]
History = tuple[Profile, ...]
Number = Union[Fraction, int, float]

RELATIONS = ("greater", "at_least", "equals_one")
PROB_TOL = 1e-9


def to_fraction(x) -> Fraction:
    """Exact conversion. Floats are converted through their shortest repr so
    that ``0.1`` becomes ``1/10`` rather than the binary expansion."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


# ---------------------------------------------------------------- objectives


@dataclass(frozen=True)
class InfinitelyOften:
    """Payoff 1 iff a profile of ``U`` is played infinitely often."""

    U: frozenset
    kind = "infinitely_often"

    def profile_sets(self) -> list[frozenset]:
        return [self.U]


@dataclass(frozen=True)
class LimsupFrequency:
    """Payoff is the limsup frequency of stages whose profile lies in ``U``."""

    U: frozenset
    kind = "limsup_frequency"

    def profile_sets(self) -> list[frozenset]:
        return [self.U]


@dataclass(frozen=True)
class FrequencyCondition:
    """A condition on the liminf frequency of ``profile_set``."""

    profile_set: frozenset
    relation: str
    threshold: Fraction = Fraction(0)
    mode = "liminf"

    def holds(self, freq: Fraction) -> bool:
        if self.relation == "greater":
            return freq > self.threshold
        if self.relation == "at_least":
            return freq >= self.threshold
        if self.relation == "equals_one":
            return freq == 1
        raise PreconditionError(f"unknown relation {self.relation!r}")


@dataclass(frozen=True)
class ThresholdTable:
    """Ordered rules ``(condition, payoff)``; the first satisfied rule wins,
    ``default`` applies when none does."""

    rules: tuple
    default: Fraction
    kind = "threshold_table"

    def profile_sets(self) -> list[frozenset]:
        return [cond.profile_set for cond, _ in self.rules]

    def outcomes(self) -> list[Fraction]:
        """Payoff of each activation pattern: rule k, then the default last."""
        return [payoff for _, payoff in self.rules] + [self.default]


@dataclass(frozen=True, eq=False)
class FiniteHorizon:
    """Payoff read off the first ``m`` profiles through ``table``."""

    m: int
    table: Mapping
    kind = "finite_horizon"

    def profile_sets(self) -> list[frozenset]:
        return []


Objective = Union[InfinitelyOften, LimsupFrequency, ThresholdTable, FiniteHorizon]
TAIL_KINDS = (InfinitelyOften, LimsupFrequency, ThresholdTable)
FREQUENCY_KINDS = (LimsupFrequency, ThresholdTable)


def is_tail(objective: Objective) -> bool:
    return isinstance(objective, TAIL_KINDS)


# ---------------------------------------------------------------- game spec


@dataclass(frozen=True, eq=False)
class GameSpec:
    players: tuple
    actions: tuple
    objectives: tuple
    payoff_bounds: tuple

    @property
    def n(self) -> int:
        return len(self.players)

    @cached_property
    def profiles(self) -> tuple:
        """All action profiles in canonical (lexicographic by action index) order."""
        return tuple(itertools.product(*self.actions))

    @cached_property
    def profile_index(self) -> dict:
        return {a: k for k, a in enumerate(self.profiles)}

    def index(self, player) -> int:
        if isinstance(player, int):
            if not 0 <= player < self.n:
                raise PreconditionError(f"no player with index {player}")
            return player
        try:
            return self.players.index(player)
        except ValueError:
            raise PreconditionError(f"unknown player {player!r}") from None

    def opponents(self, i: int) -> tuple:
        return tuple(j for j in range(self.n) if j != i)

    def is_profile(self, a) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == self.n
            and all(a[j] in self.actions[j] for j in range(self.n))
        )

    def check_profile(self, a) -> None:
        if not self.is_profile(a):
            raise InvalidPlayError(f"profile {a!r} is not formable from the spec's actions")

    def histories(self, length: int) -> Iterator[History]:
        return itertools.product(self.profiles, repeat=length)

    @property
    def max_horizon(self) -> int:
        return max((o.m for o in self.objectives if isinstance(o, FiniteHorizon)), default=0)

    @property
    def all_tail(self) -> bool:
        return all(is_tail(o) for o in self.objectives)


def replace_action(a: Profile, i: int, action: str) -> Profile:
    return a[:i] + (action,) + a[i + 1:]


# ---------------------------------------------------------------- validation


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, location: str, message: str) -> None:
        self.issues.append((location, message))

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"{loc}: {msg}" for loc, msg in self.issues)


def _objective_range(obj: Objective) -> tuple:
    if isinstance(obj, (InfinitelyOften, LimsupFrequency)):
        return Fraction(0), Fraction(1)
    if isinstance(obj, ThresholdTable):
        vals = obj.outcomes()
    else:
        vals = list(obj.table.values()) or [Fraction(0)]
    return min(vals), max(vals)


def validate_spec(spec: GameSpec) -> ValidationReport:
    """Check every structural invariant of ``spec``; never raises."""
    report = ValidationReport()
    if spec.n < 1:
        report.add("players", "at least one player required")
    if len(set(spec.players)) != len(spec.players):
        report.add("players", "duplicate player identifiers")
    if len(spec.actions) != spec.n:
        report.add("actions", "one action list per player required")
        return report
    for j, acts in enumerate(spec.actions):
        if not acts:
            report.add(f"actions.{spec.players[j]}", "empty action set")
        if len(set(acts)) != len(acts):
            report.add(f"actions.{spec.players[j]}", "duplicate action labels")
    if len(spec.objectives) != spec.n:
        report.add("objectives", "one objective per player required")
        return report
    if len(spec.payoff_bounds) != spec.n:
        report.add("payoff_bounds", "one bound pair per player required")
        return report

    for j, obj in enumerate(spec.objectives):
        loc = f"objectives.{spec.players[j]}"
        if isinstance(obj, (InfinitelyOften, LimsupFrequency)):
            for a in obj.U:
                if not spec.is_profile(a):
                    report.add(loc, f"unknown profile {list(a)!r}")
        elif isinstance(obj, ThresholdTable):
            for k, (cond, _) in enumerate(obj.rules):
                rloc = f"{loc}.rules[{k}]"
                if not cond.profile_set:
                    report.add(rloc, "condition references an empty profile set")
                if cond.relation not in RELATIONS:
                    report.add(rloc, f"unknown relation {cond.relation!r}")
                if not 0 <= cond.threshold <= 1:
                    report.add(rloc, "threshold outside [0, 1]")
                for a in cond.profile_set:
                    if not spec.is_profile(a):
                        report.add(rloc, f"unknown profile {list(a)!r}")
        elif isinstance(obj, FiniteHorizon):
            if obj.m < 1:
                report.add(loc, "horizon must be at least 1")
                continue
            bad = False
            for h in obj.table:
                if len(h) != obj.m or not all(spec.is_profile(a) for a in h):
                    report.add(loc, f"unknown profile in table key {[list(a) for a in h]!r}")
                    bad = True
            expected = len(spec.profiles) ** obj.m
            if not bad and len(obj.table) != expected:
                report.add(loc, f"table not total ({len(obj.table)} of {expected} histories)")
        else:
            report.add(loc, f"unsupported objective {type(obj).__name__}")
            continue

        lo, hi = spec.payoff_bounds[j]
        if lo > hi:
            report.add(f"payoff_bounds.{spec.players[j]}", "lower bound exceeds upper bound")
        rlo, rhi = _objective_range(obj)
        if rlo < lo or rhi > hi:
            report.add(
                f"payoff_bounds.{spec.players[j]}",
                f"bounds [{lo}, {hi}] do not contain objective range [{rlo}, {rhi}]",
            )
    return report


# ---------------------------------------------------------------- plays


@dataclass(frozen=True)
class PeriodicPlay:
    """The play ``preamble · cycle · cycle · ...``."""

    preamble: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "preamble", tuple(tuple(a) for a in self.preamble))
        object.__setattr__(self, "cycle", tuple(tuple(a) for a in self.cycle))
        if not self.cycle:
            raise PreconditionError("cycle must contain at least one profile")

    def prefix(self, length: int) -> History:
        out = list(self.preamble[:length])
        k = 0
        while len(out) < length:
            out.append(self.cycle[k % len(self.cycle)])
            k += 1
        return tuple(out)

    def profile_at(self, t: int) -> Profile:
        if t < len(self.preamble):
            return self.preamble[t]
        return self.cycle[(t - len(self.preamble)) % len(self.cycle)]

    def unrolled(self, min_preamble: int) -> "PeriodicPlay":
        """Same play with the preamble extended by whole cycles to at least
        ``min_preamble`` profiles."""
        pre = list(self.preamble)
        while len(pre) < min_preamble:
            pre.extend(self.cycle)
        return PeriodicPlay(tuple(pre), self.cycle)

    def validate(self, spec: GameSpec) -> None:
        for a in self.preamble + self.cycle:
            spec.check_profile(a)


def frequency_vector(play: PeriodicPlay) -> dict:
    """Exact limiting frequency of each profile appearing in the cycle."""
    counts = Counter(play.cycle)
    size = len(play.cycle)
    return {a: Fraction(c, size) for a, c in counts.items()}


def set_frequency(freq: Mapping, profiles: Iterable) -> Fraction:
    return sum((freq.get(a, Fraction(0)) for a in profiles), Fraction(0))


def evaluate_frequency(objective: Objective, freq: Mapping) -> Fraction:
    """Payoff of a tail objective on any play whose limiting profile
    frequencies exist and equal ``freq``; InfinitelyOften only looks at the
    support, which is exact for periodic plays and recurrent chain classes."""
    if isinstance(objective, InfinitelyOften):
        hit = any(freq.get(a, 0) > 0 for a in objective.U)
        return Fraction(int(hit))
    if isinstance(objective, LimsupFrequency):
        return set_frequency(freq, objective.U)
    if isinstance(objective, ThresholdTable):
        for cond, payoff in objective.rules:
            if cond.holds(set_frequency(freq, cond.profile_set)):
                return payoff
        return objective.default
    raise PreconditionError("finite-horizon objectives are not frequency functions")


def evaluate_history(objective: FiniteHorizon, history: Sequence) -> Fraction:
    return objective.table[tuple(history[: objective.m])]


def evaluate_periodic(objective: Objective, play: PeriodicPlay, spec: GameSpec | None = None) -> Fraction:
    if spec is not None:
        play.validate(spec)
    if isinstance(objective, FiniteHorizon):
        h = play.prefix(objective.m)
        try:
            return objective.table[h]
        except KeyError:
            raise InvalidPlayError(f"history {h!r} missing from finite-horizon table") from None
    return evaluate_frequency(objective, frequency_vector(play))


def payoff_vector(spec: GameSpec, play: PeriodicPlay) -> tuple:
    play.validate(spec)
    return tuple(evaluate_periodic(obj, play) for obj in spec.objectives)


# ---------------------------------------------------------------- mixing


def normalize_dist(weights: Mapping) -> dict:
    """Exact distribution from nonnegative weights; zero entries dropped."""
    exact = {k: to_fraction(v) if not isinstance(v, float) else Fraction(v) for k, v in weights.items()}
    if any(v < 0 for v in exact.values()):
        raise PreconditionError("negative probability weight")
    total = sum(exact.values(), Fraction(0))
    if total <= 0:
        raise PreconditionError("probability weights sum to zero")
    return {k: v / total for k, v in exact.items() if v > 0}


@dataclass(frozen=True, eq=False)
class MixedProfile:
    """Independent mixed actions for a subset of players.

    ``dists`` maps player index to ``{action: probability}``.
    """

    dists: Mapping

    @property
    def players(self) -> tuple:
        return tuple(sorted(self.dists))

    @classmethod
    def pure(cls, assignment: Mapping) -> "MixedProfile":
        return cls({j: {a: Fraction(1)} for j, a in assignment.items()})

    @classmethod
    def uniform(cls, spec: GameSpec, players: Iterable[int]) -> "MixedProfile":
        return cls({j: {a: Fraction(1, len(spec.actions[j])) for a in spec.actions[j]} for j in players})

    def exact(self) -> "MixedProfile":
        return MixedProfile({j: normalize_dist(d) for j, d in self.dists.items()})

    def validate(self, spec: GameSpec, players: Iterable[int] | None = None) -> None:
        if players is not None and tuple(sorted(players)) != self.players:
            raise PreconditionError(f"mixed profile covers players {self.players}, expected {tuple(sorted(players))}")
        for j, d in self.dists.items():
            if not 0 <= j < spec.n:
                raise PreconditionError(f"no player with index {j}")
            if not d:
                raise PreconditionError(f"empty mixed action for player {spec.players[j]}")
            for a, p in d.items():
                if a not in spec.actions[j]:
                    raise PreconditionError(f"action {a!r} not available to {spec.players[j]}")
                if p < 0:
                    raise PreconditionError("negative probability")
            if abs(float(sum(d.values())) - 1.0) > PROB_TOL:
                raise PreconditionError(f"mixed action of {spec.players[j]} does not sum to 1")

    def outcomes(self) -> list:
        """Joint outcomes as ``({player: action}, probability)`` pairs,
        enumerated in player order with zero-probability actions dropped."""
        players = self.players
        items = [[(a, p) for a, p in self.dists[j].items() if p > 0] for j in players]
        out = []
        for combo in itertools.product(*items):
            prob = 1
            for _, p in combo:
                prob *= p
            out.append(({j: a for j, (a, _) in zip(players, combo)}, prob))
        return out

    def prob(self, j: int, action: str):
        return self.dists[j].get(action, 0)

    def to_json(self, spec: GameSpec) -> dict:
        return {spec.players[j]: {a: str(p) if isinstance(p, Fraction) else p for a, p in self.dists[j].items()} for j in self.players}


def combine(*parts: MixedProfile) -> MixedProfile:
    merged = {}
    for part in parts:
        for j, d in part.dists.items():
            if j in merged:
                raise PreconditionError(f"player {j} assigned twice")
            merged[j] = d
    return MixedProfile(merged)


def profile_distribution(spec: GameSpec, mixed: MixedProfile) -> list:
    """Distribution over full profiles induced by a mixed profile covering
    every player: list of ``(profile, probability)``."""
    out = []
    for assignment, p in mixed.outcomes():
        out.append((tuple(assignment[j] for j in range(spec.n)), p))
    return out


# ---------------------------------------------------------------- automata


@dataclass(frozen=True, eq=False)
class StrategyAutomaton:
    """Finite-state joint behavioural strategy profile.

    ``emission[state]`` is a :class:`MixedProfile` over all players and
    ``transition[(state, profile)]`` the successor after observing
    ``profile``; the map is total over every profile.
    """

    states: tuple
    initial: str
    emission: Mapping
    transition: Mapping

    def next(self, state: str, profile: Profile) -> str:
        return self.transition[(state, profile)]

    def validate(self, spec: GameSpec) -> None:
        names = set(self.states)
        if self.initial not in names:
            raise PreconditionError("initial state is not a state")
        for s in self.states:
            if s not in self.emission:
                raise PreconditionError(f"state {s!r} has no emission")
            self.emission[s].validate(spec, range(spec.n))
            for a in spec.profiles:
                nxt = self.transition.get((s, a))
                if nxt is None:
                    raise PreconditionError(f"transition from {s!r} on {a!r} undefined")
                if nxt not in names:
                    raise PreconditionError(f"transition target {nxt!r} is not a state")

    def reachable(self, spec: GameSpec, start: str | None = None) -> list:
        """States reachable from ``start`` along positive-probability emissions."""
        start = self.initial if start is None else start
        seen = {start}
        order = [start]
        stack = [start]
        while stack:
            s = stack.pop()
            for a, p in profile_distribution(spec, self.emission[s]):
                if p > 0:
                    t = self.transition[(s, a)]
                    if t not in seen:
                        seen.add(t)
                        order.append(t)
                        stack.append(t)
        return order
