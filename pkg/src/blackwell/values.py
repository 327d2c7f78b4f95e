"""Blackwell minmax values per objective family, the closed/open
approximations of infinitely-often winning sets, clopen truncations and the
search for a play that is individually rational for everyone."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import freqlp
from .config import DEFAULT_CONFIG, SolverConfig
from .errors import InfeasibleError, PreconditionError, ResourceError, UnsupportedObjectiveError
from .model import (
    FiniteHorizon,
    GameSpec,
    InfinitelyOften,
    LimsupFrequency,
    MixedProfile,
    PeriodicPlay,
    ThresholdTable,
    evaluate_history,
    evaluate_periodic,
    is_tail,
    to_fraction,
)
from .stage import (
    MinmaxCertificate,
    StageReward,
    best_response_value,
    indicator_reward,
    matrix_game_solve,
    stage_minmax,
)

# ---------------------------------------------------------------- stationary responses


def _own_action_forms(spec: GameSpec, i: int, x_minus_i: MixedProfile):
    """For each profile set S, the linear form q -> P(S) when player ``i``
    mixes with weights q over her actions against ``x_minus_i``."""
    outcomes = x_minus_i.outcomes()

    def form_of(S):
        form = {}
        for a_i in spec.actions[i]:
            total = Fraction(0)
            for assignment, p in outcomes:
                prof = tuple(a_i if j == i else assignment[j] for j in range(spec.n))
                if prof in S:
                    total += Fraction(p)
            if total:
                form[a_i] = total
        return form

    return form_of


def stationary_response(spec: GameSpec, i: int, x_minus_i: MixedProfile):
    """Best stationary reply ``(value, q)`` against the i.i.d. punishment
    ``x_minus_i``; payoffs are read at the product frequency vector."""
    obj = spec.objectives[i]
    x_minus_i.validate(spec, spec.opponents(i))
    x_minus_i = x_minus_i.exact()
    form_of = _own_action_forms(spec, i, x_minus_i)
    if isinstance(obj, LimsupFrequency):
        form = form_of(obj.U)
        best = max(spec.actions[i], key=lambda a: (form.get(a, 0), -spec.actions[i].index(a)))
        return form.get(best, Fraction(0)), {best: Fraction(1)}
    if not isinstance(obj, ThresholdTable):
        raise UnsupportedObjectiveError(f"stationary responses need a frequency objective, got {obj.kind}")
    simplex = [({a: Fraction(1) for a in spec.actions[i]}, Fraction(1))]
    order = sorted(range(len(obj.rules) + 1), key=lambda k: -obj.outcomes()[k])
    for k in order:
        sol = freqlp.solve(spec.actions[i], simplex, freqlp.pattern_ineqs(obj, k, form_of))
        if sol is not None:
            return obj.outcomes()[k], sol[0]
    raise PreconditionError("no activation pattern is feasible; threshold table is inconsistent")


def stationary_response_value(spec: GameSpec, i: int, x_minus_i: MixedProfile) -> Fraction:
    return stationary_response(spec, i, x_minus_i)[0]


def _face_lower_bound(spec: GameSpec, i: int, table: ThresholdTable) -> Fraction:
    """max over own pure actions of the worst payoff the opponents can force
    on the face where player ``i`` repeats that action (opponents may even
    correlate)."""
    opp = spec.opponents(i)
    joint = list(itertools.product(*(spec.actions[j] for j in opp)))
    best = None
    for a_i in spec.actions[i]:
        def form_of(S, a_i=a_i):
            form = {}
            for c in joint:
                assignment = dict(zip(opp, c))
                assignment[i] = a_i
                if tuple(assignment[j] for j in range(spec.n)) in S:
                    form[c] = Fraction(1)
            return form

        simplex = [({c: Fraction(1) for c in joint}, Fraction(1))]
        worst = None
        for k in sorted(range(len(table.rules) + 1), key=lambda k: table.outcomes()[k]):
            if freqlp.solve(joint, simplex, freqlp.pattern_ineqs(table, k, form_of)) is not None:
                worst = table.outcomes()[k]
                break
        if best is None or worst > best:
            best = worst
    return best


def _simplex_grid(actions, resolution):
    for comp in itertools.product(range(resolution + 1), repeat=len(actions)):
        if sum(comp) == resolution:
            yield {a: Fraction(c, resolution) for a, c in zip(actions, comp) if c}


def threshold_candidates(spec: GameSpec, i: int, config: SolverConfig = DEFAULT_CONFIG) -> list:
    """Stationary punishments tried against a threshold-table objective:
    pure profiles, stage punishments for each rule's profile set and its
    complement, and a product grid over the opponents' simplices."""
    opp = spec.opponents(i)
    obj = spec.objectives[i]
    out = []
    for combo in itertools.product(*(spec.actions[j] for j in opp)):
        out.append(MixedProfile.pure(dict(zip(opp, combo))))
    for S in obj.profile_sets():
        for target in (S, frozenset(spec.profiles) - S):
            out.append(stage_minmax(spec, i, indicator_reward(spec, i, target), config).punishment)
    grids = [list(_simplex_grid(spec.actions[j], config.punishment_grid)) for j in opp]
    for combo in itertools.product(*grids):
        out.append(MixedProfile(dict(zip(opp, combo))))
    return out


# ---------------------------------------------------------------- minmax per family


def _finite_horizon_tree(spec: GameSpec, i: int, config: SolverConfig) -> dict:
    obj = spec.objectives[i]
    size = len(spec.profiles) ** obj.m
    if size > config.enumeration_cap:
        raise ResourceError(f"finite-horizon tree has {size} leaves, cap {config.enumeration_cap}")
    tree = {h: (v, v, None) for h, v in obj.table.items()}
    for t in range(obj.m - 1, -1, -1):
        for h in spec.histories(t):
            r_lo = StageReward(i, {a: tree[h + (a,)][0] for a in spec.profiles})
            r_hi = StageReward(i, {a: tree[h + (a,)][1] for a in spec.profiles})
            c_hi = stage_minmax(spec, i, r_hi, config)
            if r_lo.values == r_hi.values:
                lo = c_hi.value_lo
            else:
                lo = stage_minmax(spec, i, r_lo, config).value_lo
            tree[h] = (lo, c_hi.value_hi, c_hi)
    return tree


def finite_horizon_tree(spec: GameSpec, i: int, config: SolverConfig = DEFAULT_CONFIG) -> dict:
    """Backward induction: history -> ``(value_lo, value_hi, certificate)``;
    leaves (length ``m``) carry no certificate."""
    if not isinstance(spec.objectives[i], FiniteHorizon):
        raise UnsupportedObjectiveError("finite-horizon tree needs a finite-horizon objective")
    return _finite_horizon_tree(spec, i, config)


def finite_horizon_punishments(spec: GameSpec, i: int, config: SolverConfig = DEFAULT_CONFIG) -> dict:
    """history -> punishment of the opponents at that node."""
    return {h: c.punishment for h, (_, _, c) in finite_horizon_tree(spec, i, config).items() if c is not None}


def blackwell_minmax(spec: GameSpec, i: int, config: SolverConfig = DEFAULT_CONFIG) -> MinmaxCertificate:
    obj = spec.objectives[i]
    if isinstance(obj, InfinitelyOften):
        stage = stage_minmax(spec, i, indicator_reward(spec, i, obj.U), config)
        note = f"stage minmax in [{stage.value_lo}, {stage.value_hi}]"
        if stage.value_lo > config.tau:
            return MinmaxCertificate(Fraction(1), Fraction(1), stage.punishment, stage.method, 0.0, (note, "0-1 law: d > tau"))
        if stage.value_hi < config.tau:
            return MinmaxCertificate(Fraction(0), Fraction(0), stage.punishment, stage.method, 0.0, (note, "0-1 law: d < tau"))
        return MinmaxCertificate(
            Fraction(0), Fraction(1), stage.punishment, stage.method, 1.0, (note, "indeterminate at tolerance tau")
        )
    if isinstance(obj, LimsupFrequency):
        stage = stage_minmax(spec, i, indicator_reward(spec, i, obj.U), config)
        return MinmaxCertificate(
            stage.value_lo, stage.value_hi, stage.punishment, stage.method, stage.tolerance,
            stage.notes + ("stage minmax of the indicator of U",),
        )
    if isinstance(obj, ThresholdTable):
        if not spec.opponents(i):
            v = max(stationary_response_value(spec, i, MixedProfile({})), _face_lower_bound(spec, i, obj))
            return MinmaxCertificate(v, v, MixedProfile({}), "exhaustive_pure", 0.0)
        best = None
        for k, cand in enumerate(threshold_candidates(spec, i, config)):
            v = stationary_response_value(spec, i, cand)
            if best is None or v < best[0]:
                best = (v, k, cand)
        hi, k, pun = best
        lo = min(_face_lower_bound(spec, i, obj), hi)
        n_pure = math.prod(len(spec.actions[j]) for j in spec.opponents(i))
        method = "exhaustive_pure" if k < n_pure else "alternating"
        notes = ("stationary punishments against stationary responses",)
        return MinmaxCertificate(lo, hi, pun, method, float(hi - lo), notes)
    if isinstance(obj, FiniteHorizon):
        lo, hi, cert = finite_horizon_tree(spec, i, config)[()]
        method = "lp_exact" if spec.n == 2 else cert.method
        return MinmaxCertificate(lo, hi, cert.punishment, method, float(hi - lo), ("backward induction over the stage tree",))
    raise UnsupportedObjectiveError(f"unsupported objective {type(obj).__name__}")


def all_minmax(spec: GameSpec, config: SolverConfig = DEFAULT_CONFIG) -> list:
    return [blackwell_minmax(spec, i, config) for i in range(spec.n)]


# ---------------------------------------------------------------- block / punishment schedules


@dataclass(frozen=True, eq=False)
class BlockSchedule:
    """Cut points ``t_0 < t_1 < ...`` such that winning once in every block
    ``[t_n, t_{n+1})`` is a closed subset of the infinitely-often set."""

    player: int
    epsilon: Fraction
    d: Fraction
    cuts: tuple
    response: MixedProfile
    guarantee: str = "v_i(C) >= 1 - epsilon"

    @property
    def ratio(self):
        return 1 - self.d / 2

    def block_length(self, n: int) -> int:
        return block_length(self.d, self.epsilon, n)

    def cut(self, n: int) -> int:
        """``t_n``; generated past the stored prefix on demand."""
        if n < len(self.cuts):
            return self.cuts[n]
        t = self.cuts[-1]
        for k in range(len(self.cuts) - 1, n):
            t += self.block_length(k)
        return t

    def blocks_within(self, m: int) -> list:
        """Blocks ``(start, stop)`` with ``stop <= m``."""
        out, n = [], 0
        while self.cut(n + 1) <= m:
            out.append((self.cut(n), self.cut(n + 1)))
            n += 1
        return out

    def invariant_holds(self, n: int) -> bool:
        return self.ratio ** (self.cut(n + 1) - self.cut(n)) < Fraction(1, 2 ** (n + 1)) * self.epsilon


def block_length(d, epsilon, n: int) -> int:
    """Smallest L with ``(1 - d/2)^L < 2^(-n-1) * epsilon``."""
    ratio = 1 - d / 2
    bound = epsilon / 2 ** (n + 1)
    if ratio <= 0:
        return 1
    guess = max(1, int(math.floor(math.log(float(bound)) / math.log(float(ratio)))) - 1)
    L = guess
    while ratio ** L >= bound:
        L += 1
    while L > 1 and ratio ** (L - 1) < bound:
        L -= 1
    return L


def closed_block_approximation(spec: GameSpec, i: int, epsilon, blocks: int = 8, config: SolverConfig = DEFAULT_CONFIG) -> BlockSchedule:
    obj = spec.objectives[i]
    if not isinstance(obj, InfinitelyOften):
        raise UnsupportedObjectiveError("block approximation needs an infinitely-often objective")
    epsilon = to_fraction(epsilon)
    if not 0 < epsilon < 1:
        raise PreconditionError("epsilon must lie in (0, 1)")
    r = indicator_reward(spec, i, obj.U)
    cert = stage_minmax(spec, i, r, config)
    if cert.value_lo <= 0:
        raise PreconditionError(f"cannot certify d_i > 0 (stage bracket [{cert.value_lo}, {cert.value_hi}])")
    d = cert.value_lo if isinstance(cert.value_lo, Fraction) else Fraction(cert.value_lo)
    cuts = [0]
    for n in range(blocks):
        cuts.append(cuts[-1] + block_length(d, epsilon, n))
    return BlockSchedule(i, epsilon, d, tuple(cuts), stage_guarantee_strategy(spec, i, r))


def stage_guarantee_strategy(spec: GameSpec, i: int, r: StageReward) -> MixedProfile:
    """Player ``i``'s maxmin mixed action for the stage reward ``r`` (against
    correlated opponents when there are several)."""
    opp = spec.opponents(i)
    if not opp:
        best = max(spec.actions[i], key=lambda a: r((a,)))
        return MixedProfile.pure({i: best})
    cols = list(itertools.product(*(spec.actions[j] for j in opp)))
    M = []
    for ai in spec.actions[i]:
        row = []
        for c in cols:
            assignment = dict(zip(opp, c))
            assignment[i] = ai
            row.append(r(tuple(assignment[j] for j in range(spec.n))))
        M.append(row)
    sol = matrix_game_solve(M)
    return MixedProfile({i: {a: p for a, p in zip(spec.actions[i], sol.row) if p > 0}})


@dataclass(frozen=True, eq=False)
class PunishmentSchedule:
    player: int
    epsilon: Fraction
    punishments: tuple  # one MixedProfile per listed stage
    bounds: tuple  # best-response win probability per listed stage
    stationary: bool

    def punishment_at(self, t: int) -> MixedProfile:
        if t < len(self.punishments):
            return self.punishments[t]
        if self.stationary:
            return self.punishments[-1]
        raise PreconditionError(f"schedule lists only {len(self.punishments)} stages")

    def holds(self) -> bool:
        return all(b <= self.epsilon / 2 ** (t + 1) for t, b in enumerate(self.bounds))


def open_superset_schedule(spec: GameSpec, i: int, epsilon, stages: int = 16, config: SolverConfig = DEFAULT_CONFIG) -> PunishmentSchedule:
    obj = spec.objectives[i]
    if not isinstance(obj, InfinitelyOften):
        raise UnsupportedObjectiveError("open superset schedule needs an infinitely-often objective")
    epsilon = to_fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise PreconditionError("epsilon must lie in (0, 1]")
    r = indicator_reward(spec, i, obj.U)
    cert = stage_minmax(spec, i, r, config)
    if cert.value_hi >= config.tau:
        raise PreconditionError(f"stage minmax is positive (bracket [{cert.value_lo}, {cert.value_hi}])")
    value, _ = best_response_value(spec, i, r, cert.punishment)
    if value != 0:
        raise PreconditionError(f"punishment concedes win probability {value}; cannot build a schedule")
    return PunishmentSchedule(i, epsilon, (cert.punishment,) * stages, (Fraction(0),) * stages, True)


# ---------------------------------------------------------------- clopen truncations


@dataclass(frozen=True, eq=False)
class TruncationSet:
    horizon: int
    alive: frozenset
    player: int
    source: str

    def project(self) -> frozenset:
        """Alive histories cut back by one stage."""
        return frozenset(h[:-1] for h in self.alive)

    def nested_in(self, shorter: "TruncationSet") -> bool:
        return shorter.horizon == self.horizon - 1 and self.project() <= shorter.alive

    def to_csv_rows(self) -> list:
        return [["|".join(",".join(a) for a in h)] for h in sorted(self.alive)]


def clopen_truncation(
    spec: GameSpec,
    i: int,
    m: int,
    *,
    target: str = "ir",
    schedule: BlockSchedule | None = None,
    epsilon=None,
    config: SolverConfig = DEFAULT_CONFIG,
) -> TruncationSet:
    """Length-``m`` histories that still admit a continuation inside the
    target closed set.

    ``target`` is ``"all"`` (every play), ``"block"`` (the set induced by
    ``schedule``) or ``"ir"`` (player ``i``'s epsilon-individually rational
    plays).
    """
    if m < 0:
        raise PreconditionError("horizon must be nonnegative")
    size = len(spec.profiles) ** m
    if size > config.enumeration_cap:
        raise ResourceError(f"{size} histories of length {m} exceed cap {config.enumeration_cap}")
    histories = list(spec.histories(m))
    if target == "all":
        return TruncationSet(m, frozenset(histories), i, "all")
    if target == "block":
        if schedule is None:
            raise PreconditionError("block target needs a schedule")
        U = spec.objectives[schedule.player].U
        if not U:
            return TruncationSet(m, frozenset(), i, "block")
        blocks = schedule.blocks_within(m)
        alive = [h for h in histories if all(any(h[t] in U for t in range(s, e)) for s, e in blocks)]
        return TruncationSet(m, frozenset(alive), i, "block")
    if target != "ir":
        raise PreconditionError(f"unknown truncation target {target!r}")
    if epsilon is None:
        raise PreconditionError("individually rational target needs epsilon")
    obj = spec.objectives[i]
    if is_tail(obj):
        # a tail payoff ignores any finite prefix
        return TruncationSet(m, frozenset(histories), i, f"ir:{obj.kind}")
    need = blackwell_minmax(spec, i, config).value_lo - to_fraction(epsilon)
    if m >= obj.m:
        alive = [h for h in histories if obj.table[h[: obj.m]] >= need]
    else:
        good_prefixes = {h[:m] for h, v in obj.table.items() if v >= need}
        alive = [h for h in histories if h in good_prefixes]
    return TruncationSet(m, frozenset(alive), i, "ir:finite_horizon")


# ---------------------------------------------------------------- common play search


def intersection_bound(probs) -> Fraction | float:
    """Lower bound ``max(0, sum p_k - n + 1)`` on the probability that n
    events with probabilities ``probs`` all occur."""
    probs = list(probs)
    for p in probs:
        if not 0 <= p <= 1:
            raise PreconditionError(f"probability {p} outside [0, 1]")
    if not probs:
        return 1
    total = sum(probs) - len(probs) + 1
    return max(0 * total, total)


@dataclass(frozen=True, eq=False)
class FrequencyProgram:
    """Profiles grouped by their membership in every set the objectives
    mention; tail payoffs only depend on the class frequencies."""

    classes: tuple  # tuple of tuples of profiles
    members: Mapping  # profile -> class index

    @classmethod
    def build(cls, spec: GameSpec, players=None) -> "FrequencyProgram":
        players = range(spec.n) if players is None else players
        sets = []
        for i in players:
            sets.extend(spec.objectives[i].profile_sets())
        groups = {}
        for a in spec.profiles:
            sig = tuple(a in S for S in sets)
            groups.setdefault(sig, []).append(a)
        classes = tuple(tuple(g) for g in groups.values())
        members = {a: k for k, g in enumerate(classes) for a in g}
        return cls(classes, members)

    @property
    def variables(self) -> range:
        return range(len(self.classes))

    def form(self, S) -> dict:
        return {k: Fraction(1) for k, g in enumerate(self.classes) if g[0] in S}

    def simplex(self) -> list:
        return [({k: Fraction(1) for k in self.variables}, Fraction(1))]

    def realize(self, counts) -> tuple:
        """Cycle repeating each class representative ``counts[k]`` times."""
        cycle = []
        for k, c in enumerate(counts):
            cycle.extend([self.classes[k][0]] * int(c))
        return tuple(cycle)

    def frequency(self, point) -> dict:
        return {self.classes[k][0]: v for k, v in point.items() if v}


def round_to_denominator(point: Mapping, q: int) -> list:
    """Largest-remainder rounding of a probability vector to multiples of 1/q."""
    keys = sorted(point)
    scaled = [point[k] * q for k in keys]
    floors = [math.floor(s) for s in scaled]
    rest = q - sum(floors)
    order = sorted(range(len(keys)), key=lambda j: (-(scaled[j] - floors[j]), j))
    for j in order[:rest]:
        floors[j] += 1
    return [floors[keys.index(k)] if k in keys else 0 for k in range(max(keys) + 1)] if keys else []


def tail_requirements(spec: GameSpec, i: int, need: Fraction, program: FrequencyProgram):
    """Alternative constraint lists (a disjunction) under which player ``i``'s
    tail payoff is at least ``need``, each tagged with the payoff it yields."""
    obj = spec.objectives[i]
    label = f"{spec.players[i]}: "
    if isinstance(obj, InfinitelyOften):
        options = []
        if Fraction(1) >= need:
            options.append((Fraction(1), [freqlp.Ineq(program.form(obj.U), Fraction(0), True, label + "hit U")]))
        if Fraction(0) >= need:
            options.append((Fraction(0), [freqlp.Ineq({k: -c for k, c in program.form(obj.U).items()}, Fraction(0), False, label + "avoid U")]))
        return options
    if isinstance(obj, LimsupFrequency):
        return [(None, [freqlp.Ineq(program.form(obj.U), -need, False, label + f"freq(U) >= {need}")])]
    if isinstance(obj, ThresholdTable):
        return [
            (payoff, freqlp.pattern_ineqs(obj, k, program.form, label))
            for k, payoff in enumerate(obj.outcomes())
            if payoff >= need
        ]
    raise UnsupportedObjectiveError(obj.kind)


def _tail_cycle(spec, eps, certs, config, players):
    program = FrequencyProgram.build(spec, players)
    needs = {i: certs[i].value_lo - eps for i in players}
    option_lists = [tail_requirements(spec, i, needs[i], program) for i in players]
    report = {"players": [spec.players[i] for i in players], "required": {spec.players[i]: str(needs[i]) for i in players}}
    for i, opts in zip(players, option_lists):
        if not opts:
            report["violated"] = [f"{spec.players[i]}: no payoff reaches {needs[i]}"]
            raise InfeasibleError("no individually rational outcome for " + spec.players[i], report)
    points = []
    for combo in itertools.product(*option_lists):
        ineqs = [q for _, qs in combo for q in qs]
        sol = freqlp.solve(program.variables, program.simplex(), ineqs)
        if sol is not None:
            points.append(sol[0])
    if not points:
        report["violated"] = ["no frequency vector satisfies every player's payoff constraint"]
        raise InfeasibleError("no individually rational frequency vector", report)

    def ok(cycle):
        play = PeriodicPlay((), cycle)
        return all(evaluate_periodic(spec.objectives[i], play) >= needs[i] for i in players)

    best = None
    for q in range(1, config.denominator_cap + 1):
        for point in points:
            counts = round_to_denominator(point, q)
            cycle = program.realize(counts)
            if len(cycle) != q:
                continue
            if ok(cycle):
                return cycle
            if best is None:
                best = cycle
    raise ResourceError(f"no periodic witness with cycle length <= {config.denominator_cap}", best)


def _deviation_levels(spec, i, prefix, tree):
    """Subgame values player ``i`` could secure by deviating along ``prefix``."""
    levels = []
    obj = spec.objectives[i]
    for t in range(min(obj.m, len(prefix))):
        for b in spec.actions[i]:
            if b == prefix[t][i]:
                continue
            dev = prefix[t][:i] + (b,) + prefix[t][i + 1:]
            node = tuple(prefix[:t]) + (dev,)
            levels.append(tree[node][1])
    return levels


def common_play_search(spec: GameSpec, epsilon, config: SolverConfig = DEFAULT_CONFIG, certificates=None) -> PeriodicPlay:
    """A periodic play giving every player at least ``value_lo - epsilon``.

    Finite-horizon players additionally get at least what a deviation along
    the prefix followed by subgame punishment would leave them, so grim
    trigger keeps them in line.
    """
    eps = to_fraction(epsilon)
    certs = certificates or all_minmax(spec, config)
    for i, c in enumerate(certs):
        if isinstance(spec.objectives[i], InfinitelyOften) and not c.exact:
            raise PreconditionError(f"minmax of {spec.players[i]} unresolved at tolerance")
    tail_players = [i for i in range(spec.n) if is_tail(spec.objectives[i])]
    fh_players = [i for i in range(spec.n) if not is_tail(spec.objectives[i])]

    cycle = _tail_cycle(spec, eps, certs, config, tail_players) if tail_players else None

    preamble = ()
    if fh_players:
        M = spec.max_horizon
        if len(spec.profiles) ** M > config.enumeration_cap:
            raise ResourceError(f"{len(spec.profiles) ** M} prefixes exceed cap {config.enumeration_cap}")
        trees = {i: finite_horizon_tree(spec, i, config) for i in fh_players}
        best = None
        for h in spec.histories(M):
            violated = []
            for i in fh_players:
                got = evaluate_history(spec.objectives[i], h)
                need = max([certs[i].value_lo] + _deviation_levels(spec, i, h, trees[i])) - eps
                if got < need:
                    violated.append({"player": spec.players[i], "required": str(need), "achieved": str(got)})
            if not violated:
                preamble = h
                break
            if best is None or len(violated) < len(best[1]):
                best = (h, violated)
        else:
            report = {
                "best_prefix": [list(a) for a in best[0]],
                "violated": best[1],
            }
            raise InfeasibleError("no finite-horizon prefix is individually rational and deviation-proof", report)
        if cycle is None:
            cycle = (preamble[-1],)
    return PeriodicPlay(preamble, cycle)


# ---------------------------------------------------------------- history independence


def history_independence_report(spec: GameSpec, i: int, config: SolverConfig = DEFAULT_CONFIG) -> dict:
    obj = spec.objectives[i]
    if is_tail(obj):
        return {
            "player": spec.players[i],
            "objective": obj.kind,
            "tail": True,
            "history_independent": True,
            "reason": "tail objective: minmax value identical in every subgame",
        }
    tree = finite_horizon_tree(spec, i, config)
    root = tree[()]
    subgames = {}
    for a in spec.profiles:
        lo, hi, _ = tree[(a,)]
        subgames[",".join(a)] = str(lo) if lo == hi else [str(lo), str(hi)]
    independent = all(tree[(a,)][0] == root[0] and tree[(a,)][1] == root[1] for a in spec.profiles)
    return {
        "player": spec.players[i],
        "objective": obj.kind,
        "tail": False,
        "history_independent": independent,
        "reason": "history-dependent possible: payoff depends on a finite prefix",
        "root_value": str(root[0]) if root[0] == root[1] else [str(root[0]), str(root[1])],
        "subgame_values_after_stage_1": subgames,
    }
