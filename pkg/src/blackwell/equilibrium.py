"""Equilibrium synthesis: grim-trigger automata, jointly controlled
lotteries, the payoff polytope and folk-theorem targets."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import freqlp
from .config import DEFAULT_CONFIG, SolverConfig
from .errors import PreconditionError, ResourceError
from .hull import caratheodory, distance_to_hull, extreme_points
from .lp import solve_exact
from .model import (
    FiniteHorizon,
    GameSpec,
    InfinitelyOften,
    LimsupFrequency,
    MixedProfile,
    PeriodicPlay,
    StrategyAutomaton,
    ThresholdTable,
    combine,
    is_tail,
    payoff_vector,
    to_fraction,
)
from .values import (
    FrequencyProgram,
    all_minmax,
    common_play_search,
    finite_horizon_punishments,
    round_to_denominator,
)


class TargetOutsideError(PreconditionError):
    """The requested payoff is not within epsilon of the payoff polytope."""


# ---------------------------------------------------------------- grim trigger


def path_state(k: int) -> str:
    return f"p{k}"


def punish_state(i: int, history=None) -> str:
    if history is None:
        return f"punish:{i}"
    if history == "end":
        return f"punish:{i}:end"
    return f"punish:{i}:" + "|".join(",".join(a) for a in history)


def _first_actions(spec: GameSpec, players) -> MixedProfile:
    return MixedProfile.pure({j: spec.actions[j][0] for j in players})


def _deviator(prescribed, observed) -> int | None:
    for j, (x, y) in enumerate(zip(prescribed, observed)):
        if x != y:
            return j
    return None


def grim_trigger(spec: GameSpec, play: PeriodicPlay, punishments, epsilon=0, *, prefix: str = "") -> StrategyAutomaton:
    """Follow ``play``; after the first deviation punish the lowest-index
    deviator forever.

    ``punishments[i]`` is either a :class:`MixedProfile` over the opponents
    of ``i`` (stationary punishment) or a mapping history -> MixedProfile for
    a finite-horizon objective, in which case the opponents punish at the
    node actually reached and stop caring once the horizon has passed.
    """
    play.validate(spec)
    if len(punishments) != spec.n:
        raise PreconditionError("one punishment per player required")
    for i, pun in enumerate(punishments):
        for mp in (pun.values() if isinstance(pun, Mapping) else [pun]):
            mp.validate(spec, spec.opponents(i))
    path = play.preamble + play.cycle
    n_path = len(path)
    states, emission, transition = [], {}, {}

    def add(name, mixed):
        if name not in emission:
            states.append(name)
            emission[name] = mixed

    for k, a in enumerate(path):
        add(prefix + path_state(k), MixedProfile.pure(dict(enumerate(a))))

    pending = []  # (state name, player, history or None)
    for i, pun in enumerate(punishments):
        if not isinstance(pun, Mapping):
            name = prefix + punish_state(i)
            add(name, combine(pun, _first_actions(spec, [i])))
            for a in spec.profiles:
                transition[(name, a)] = name

    end_states = {}

    def fh_state(i, history):
        m = spec.objectives[i].m
        pun = punishments[i]
        if len(history) >= m:
            name = prefix + punish_state(i, "end")
            if name not in emission:
                add(name, _first_actions(spec, range(spec.n)))
                for a in spec.profiles:
                    transition[(name, a)] = name
            return name
        name = prefix + punish_state(i, history)
        if name not in emission:
            add(name, combine(pun[history], _first_actions(spec, [i])))
            pending.append((name, i, history))
        return name

    def on_deviation(i, history):
        if isinstance(punishments[i], Mapping):
            return fh_state(i, history)
        return prefix + punish_state(i)

    for k, a in enumerate(path):
        name = prefix + path_state(k)
        nxt = k + 1 if k + 1 < n_path else len(play.preamble)
        history = play.prefix(k)
        for b in spec.profiles:
            j = _deviator(a, b)
            if j is None:
                transition[(name, b)] = prefix + path_state(nxt)
            else:
                transition[(name, b)] = on_deviation(j, history + (b,))
    while pending:
        name, i, history = pending.pop()
        for b in spec.profiles:
            transition[(name, b)] = fh_state(i, history + (b,))
    return StrategyAutomaton(tuple(states), prefix + path_state(0), emission, transition)


def punishment_profiles(spec: GameSpec, certificates, config: SolverConfig = DEFAULT_CONFIG) -> list:
    """Per-player punishments for :func:`grim_trigger`: the certificate's
    stationary profile for tail objectives, node punishments otherwise."""
    out = []
    for i, cert in enumerate(certificates):
        if isinstance(spec.objectives[i], FiniteHorizon):
            out.append(finite_horizon_punishments(spec, i, config))
        else:
            out.append(cert.punishment)
    return out


# ---------------------------------------------------------------- lotteries


def dyadic_boundaries(weights, rounds: int) -> list:
    """Integer cut points ``0 = B_0 <= ... <= B_k = 2^R`` rounding the
    cumulative weights to the nearest multiple of ``2^-R``."""
    scale = 2 ** rounds
    cuts = [0]
    acc = Fraction(0)
    for w in weights[:-1]:
        acc += w
        cuts.append(math.floor(acc * scale + Fraction(1, 2)))
    cuts.append(scale)
    return cuts


@dataclass(frozen=True, eq=False)
class LotteryTree:
    """XOR lottery over ``rounds`` bits; an outcome is fixed as soon as the
    bit prefix determines it."""

    weights: tuple
    rounds: int
    boundaries: tuple
    players: tuple  # the two lottery players
    _resolved_cache: dict = field(default_factory=dict, repr=False)

    @property
    def achieved(self) -> tuple:
        scale = 2 ** self.rounds
        return tuple(Fraction(b - a, scale) for a, b in zip(self.boundaries, self.boundaries[1:]))

    @property
    def max_error(self) -> Fraction:
        return max(abs(a - w) for a, w in zip(self.achieved, self.weights))

    def outcome_of(self, bits) -> int:
        x = int("".join(map(str, bits)) or "0", 2) << (self.rounds - len(bits))
        for k in range(len(self.weights)):
            if self.boundaries[k] <= x < self.boundaries[k + 1]:
                return k
        raise AssertionError("bit pattern outside the lottery range")

    def resolved(self, bits):
        """Outcome index if the prefix ``bits`` already fixes it, else ``None``."""
        span = 2 ** (self.rounds - len(bits))
        lo = int("".join(map(str, bits)) or "0", 2) * span
        hi = lo + span  # exclusive
        for k in range(len(self.weights)):
            if self.boundaries[k] <= lo and hi <= self.boundaries[k + 1]:
                return k
        return None

    def prefixes(self) -> list:
        """Unresolved bit prefixes, breadth first."""
        out, frontier = [], [()]
        while frontier:
            nxt = []
            for p in frontier:
                if self.resolved(p) is None:
                    out.append(p)
                    nxt.extend([p + (0,), p + (1,)])
            frontier = nxt
        return out

    def outcome_distribution(self, deviation=None, deviator: int = 0) -> tuple:
        """Exact outcome distribution when lottery player ``deviator`` emits
        bit 1 with probability ``deviation(xor_prefix)`` and the other
        player is honest; ``None`` means both honest."""
        dist = [Fraction(0)] * len(self.weights)

        half = Fraction(1, 2)
        resolved = self._resolved_cache

        def walk(prefix, mass):
            if prefix not in resolved:
                resolved[prefix] = self.resolved(prefix)
            k = resolved[prefix]
            if k is not None:
                dist[k] += mass
                return
            q = half if deviation is None else deviation(prefix)
            if not isinstance(q, Fraction):
                q = Fraction(q)
            # the other lottery player's fair bit is XORed onto the deviator's
            child = {}
            for own, p_own in ((0, 1 - q), (1, q)):
                if p_own:
                    m = mass * p_own * half
                    for other in (0, 1):
                        bit = own ^ other
                        child[bit] = child[bit] + m if bit in child else m
            for bit in sorted(child):
                walk(prefix + (bit,), child[bit])

        walk((), Fraction(1))
        return tuple(dist)


def lottery_players(spec: GameSpec) -> tuple:
    """Two lowest-index players with at least two actions each."""
    cands = [j for j in range(spec.n) if len(spec.actions[j]) >= 2]
    if len(cands) < 2:
        raise PreconditionError("a lottery needs two players with at least two actions")
    return tuple(cands[:2])


def jcl_preamble(weights, rounds: int, spec: GameSpec | None = None, config: SolverConfig = DEFAULT_CONFIG):
    """Lottery over ``len(weights)`` outcomes.

    Returns ``(fragment, outcome_map, achieved)``: ``fragment`` maps each
    unresolved prefix state to its emission (``None`` without a spec),
    ``outcome_map`` sends each length-``rounds`` bit pattern to its outcome.
    """
    tree = make_lottery(weights, rounds, spec, config)
    fragment = {}
    for p in tree.prefixes():
        fragment[lottery_state(p)] = _lottery_emission(spec, tree) if spec is not None else None
    outcome_map = {bits: tree.outcome_of(bits) for bits in itertools.product((0, 1), repeat=rounds)}
    return fragment, outcome_map, tree.achieved


def make_lottery(weights, rounds: int, spec: GameSpec | None = None, config: SolverConfig = DEFAULT_CONFIG) -> LotteryTree:
    weights = tuple(to_fraction(w) for w in weights)
    if not weights:
        raise PreconditionError("a lottery needs at least one outcome")
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise PreconditionError("lottery weights must be nonnegative and sum to 1")
    if rounds < 0 or rounds > config.jcl_round_cap:
        raise PreconditionError(f"round count {rounds} outside [0, {config.jcl_round_cap}]")
    players = lottery_players(spec) if spec is not None and len(weights) > 1 else ()
    return LotteryTree(weights, rounds, tuple(dyadic_boundaries(list(weights), rounds)), players)


def lottery_state(prefix) -> str:
    return "jcl:" + "".join(map(str, prefix))


def _lottery_emission(spec: GameSpec, tree: LotteryTree) -> MixedProfile:
    dists = {}
    for j in range(spec.n):
        if j in tree.players:
            a, b = spec.actions[j][:2]
            dists[j] = {a: Fraction(1, 2), b: Fraction(1, 2)}
        else:
            dists[j] = {spec.actions[j][0]: Fraction(1)}
    return MixedProfile(dists)


def dyadic_rounds(weights, cap: int):
    """Smallest R making every weight a multiple of 2^-R, or ``None``."""
    for R in range(cap + 1):
        if all((w * 2 ** R).denominator == 1 for w in weights):
            return R
    return None


def lottery_automaton(spec: GameSpec, tree: LotteryTree, continuations) -> StrategyAutomaton:
    """Run the lottery, then hand over to ``continuations[k]`` (automata
    whose state names are already disjoint)."""
    if len(continuations) != len(tree.weights):
        raise PreconditionError("one continuation per lottery outcome required")
    if len(continuations) == 1:
        return continuations[0]
    states, emission, transition = [], {}, {}
    emit = _lottery_emission(spec, tree)
    a_idx, b_idx = tree.players
    for p in tree.prefixes():
        name = lottery_state(p)
        states.append(name)
        emission[name] = emit
        for prof in spec.profiles:
            bit = int(spec.actions[a_idx].index(prof[a_idx]) != 0) ^ int(spec.actions[b_idx].index(prof[b_idx]) != 0)
            q = p + (bit,)
            k = tree.resolved(q)
            transition[(name, prof)] = continuations[k].initial if k is not None else lottery_state(q)
    for auto in continuations:
        for s in auto.states:
            if s in emission:
                raise PreconditionError(f"state name clash: {s}")
            states.append(s)
            emission[s] = auto.emission[s]
        transition.update(auto.transition)
    return StrategyAutomaton(tuple(states), lottery_state(()), emission, transition)


# ---------------------------------------------------------------- artifacts


@dataclass
class EquilibriumArtifact:
    automaton: StrategyAutomaton
    epsilon: Fraction
    payoffs: tuple
    certificates: list
    plays: list
    weights: tuple = (Fraction(1),)
    declared_gain: Fraction | None = None
    deviation_bound: object = None
    notes: list = field(default_factory=list)

    def individually_rational(self, spec: GameSpec) -> bool:
        return all(self.payoffs[i] >= c.value_lo - self.epsilon for i, c in enumerate(self.certificates))


def synthesize_equilibrium(spec: GameSpec, epsilon, config: SolverConfig = DEFAULT_CONFIG) -> EquilibriumArtifact:
    """minmax certificates -> common individually rational play -> grim trigger."""
    eps = to_fraction(epsilon)
    certs = all_minmax(spec, config)
    unresolved = [spec.players[i] for i, c in enumerate(certs) if isinstance(spec.objectives[i], InfinitelyOften) and not c.exact]
    if unresolved:
        raise PreconditionError(f"minmax unresolved for {unresolved}")
    play = common_play_search(spec, eps, config, certs)
    auto = grim_trigger(spec, play, punishment_profiles(spec, certs, config), eps)
    pay = payoff_vector(spec, play)
    return EquilibriumArtifact(auto, eps, pay, certs, [play], (Fraction(1),), 2 * eps)


def lottery_artifact(spec: GameSpec, plays, weights, rounds: int, epsilon=0, certificates=None, config: SolverConfig = DEFAULT_CONFIG, punishments=None) -> EquilibriumArtifact:
    """Lottery over ``plays`` followed by grim trigger on the selected play.
    Individual rationality of the plays is not checked here."""
    eps = to_fraction(epsilon)
    certs = certificates or all_minmax(spec, config)
    if len(plays) > 1 and not spec.all_tail:
        raise PreconditionError("lotteries shift finite-horizon payoffs; only tail objectives are supported")
    tree = make_lottery(weights, rounds, spec, config)
    puns = punishments or punishment_profiles(spec, certs, config)
    conts = []
    for k, play in enumerate(plays):
        conts.append(grim_trigger(spec, play, puns, eps, prefix=f"o{k}:" if len(plays) > 1 else ""))
    auto = lottery_automaton(spec, tree, conts)
    vecs = [payoff_vector(spec, p) for p in plays]
    expected = tuple(sum((w * v[i] for w, v in zip(tree.achieved, vecs)), Fraction(0)) for i in range(spec.n))
    return EquilibriumArtifact(auto, eps, expected, certs, list(plays), tree.achieved, 3 * eps)


# ---------------------------------------------------------------- payoff polytope


@dataclass(frozen=True, eq=False)
class PayoffPolytope:
    n: int
    vertices: tuple
    provenance: tuple  # per vertex: PeriodicPlay or a description string
    epsilon: Fraction
    points: tuple = ()  # every candidate payoff before hull reduction
    ir_levels: tuple | None = None

    def witness(self, k: int) -> PeriodicPlay | None:
        p = self.provenance[k]
        return p if isinstance(p, PeriodicPlay) else None

    def contains(self, w) -> bool:
        return distance_to_hull(self.vertices, w)[0] == 0 if self.vertices else False


def _tail_patterns(spec, players, program, needs):
    """Per player, a list of ``(label, payoff or None, ineqs)``; ``None``
    payoff means linear in the frequencies (limsup frequency)."""
    out = []
    for i in players:
        obj = spec.objectives[i]
        need = None if needs is None else needs[i]
        opts = []
        if isinstance(obj, InfinitelyOften):
            form = program.form(obj.U)
            opts.append(("hit", Fraction(1), [freqlp.Ineq(form, Fraction(0), True)]))
            opts.append(("miss", Fraction(0), [freqlp.Ineq({k: -c for k, c in form.items()}, Fraction(0), False)]))
        elif isinstance(obj, LimsupFrequency):
            ineqs = [] if need is None else [freqlp.Ineq(program.form(obj.U), -need, False)]
            opts.append(("freq", None, ineqs))
        elif isinstance(obj, ThresholdTable):
            for k, payoff in enumerate(obj.outcomes()):
                opts.append((f"rule{k}" if k < len(obj.rules) else "default", payoff, freqlp.pattern_ineqs(obj, k, program.form)))
        if need is not None:
            opts = [o for o in opts if o[1] is None or o[1] >= need]
        out.append(opts)
    return out


def _polytope_vertices(nvar: int, ineqs, cap: int) -> list:
    """Vertices of {x >= 0, sum x = 1, ineqs (closed)} by brute force over
    choices of tight constraints."""
    rows = []  # (coeffs list, const) meaning coeffs.x + const >= 0
    for q in ineqs:
        rows.append(([q.coeffs.get(k, Fraction(0)) for k in range(nvar)], q.const))
    for k in range(nvar):
        e = [Fraction(0)] * nvar
        e[k] = Fraction(1)
        rows.append((e, Fraction(0)))
    need = nvar - 1
    if math.comb(len(rows), need) > cap:
        raise ResourceError(f"vertex enumeration over {math.comb(len(rows), need)} bases exceeds cap {cap}")
    out = []
    for combo in itertools.combinations(range(len(rows)), need):
        A = [[Fraction(1)] * nvar] + [rows[r][0] for r in combo]
        b = [Fraction(1)] + [-rows[r][1] for r in combo]
        x = solve_exact(A, b)
        if x is None:
            continue
        if all(sum(c * v for c, v in zip(co, x)) + const >= 0 for co, const in rows):
            x = tuple(x)
            if x not in out:
                out.append(x)
    return out


def _realize(spec, program, point, players, targets, D):
    """Cycle with denominator <= D whose tail payoffs for ``players`` equal
    ``targets`` exactly, or ``None``."""
    for q in range(1, D + 1):
        pt = {k: v for k, v in enumerate(point) if v}
        counts = round_to_denominator(pt, q)
        counts = counts + [0] * (len(program.classes) - len(counts))
        cycle = program.realize(counts)
        if len(cycle) != q:
            continue
        play = PeriodicPlay((), cycle)
        vec = payoff_vector(spec, play)
        if all(vec[i] == t for i, t in zip(players, targets)):
            return play
    return None


def _tail_payoff_points(spec, players, eps, certs, D, config, ir):
    program = FrequencyProgram.build(spec, players)
    needs = {i: certs[i].value_lo - eps for i in players} if ir else None
    patterns = _tail_patterns(spec, players, program, needs)
    points = {}  # payoff tuple -> provenance
    nvar = len(program.classes)
    for combo in itertools.product(*patterns):
        ineqs = [q for _, _, qs in combo for q in qs]
        if freqlp.solve(program.variables, program.simplex(), ineqs) is None:
            continue
        closed = [freqlp.Ineq(q.coeffs, q.const, False, q.label) for q in ineqs]
        for x in _polytope_vertices(nvar, closed, config.enumeration_cap):
            vec = []
            for i, (_, payoff, _) in zip(players, combo):
                vec.append(payoff if payoff is not None else sum((x[k] for k in program.form(spec.objectives[i].U)), Fraction(0)))
            vec = tuple(vec)
            if isinstance(points.get(vec), PeriodicPlay):
                continue
            # a witness in the same pattern with exactly this payoff
            fixed = [
                (program.form(spec.objectives[i].U), v)
                for i, (_, payoff, _), v in zip(players, combo, vec)
                if payoff is None
            ]
            witness = None
            # prefer a play strictly inside every constraint, then one that
            # satisfies the pattern, then the vertex itself
            for interior in (True, False):
                sol = freqlp.solve(program.variables, program.simplex() + fixed, ineqs, interior=interior)
                if sol is not None:
                    pt = tuple(sol[0][k] for k in range(nvar))
                    witness = _realize(spec, program, pt, players, vec, D)
                if witness is not None:
                    break
            if witness is None and all(q.holds(dict(enumerate(x))) for q in ineqs):
                witness = _realize(spec, program, x, players, vec, D)
            points[vec] = witness if witness is not None else points.get(vec, "closure point")
    return points


def payoff_set(spec: GameSpec, epsilon, denominator: int | None = None, config: SolverConfig = DEFAULT_CONFIG, *, ir: bool = True, certificates=None) -> PayoffPolytope:
    """Convex hull of the payoff vectors of epsilon-individually-rational
    eventually periodic plays (closure included); ``ir=False`` drops the
    individual rationality filter."""
    eps = to_fraction(epsilon)
    D = denominator or config.denominator_cap
    certs = certificates or all_minmax(spec, config)
    tail = [i for i in range(spec.n) if is_tail(spec.objectives[i])]
    fh = [i for i in range(spec.n) if not is_tail(spec.objectives[i])]
    tail_pts = _tail_payoff_points(spec, tail, eps, certs, D, config, ir) if tail else {(): None}
    fh_pts = {(): ()}
    if fh:
        M = spec.max_horizon
        if len(spec.profiles) ** M > config.enumeration_cap:
            raise ResourceError(f"{len(spec.profiles) ** M} prefixes exceed cap {config.enumeration_cap}")
        fh_pts = {}
        for h in spec.histories(M):
            vec = tuple(spec.objectives[i].table[h[: spec.objectives[i].m]] for i in fh)
            if ir and any(v < certs[i].value_lo - eps for i, v in zip(fh, vec)):
                continue
            fh_pts.setdefault(vec, h)
    points = {}
    for tv, tw in tail_pts.items():
        for fv, fw in fh_pts.items():
            full = [None] * spec.n
            for i, v in zip(tail, tv):
                full[i] = v
            for i, v in zip(fh, fv):
                full[i] = v
            full = tuple(full)
            if isinstance(tw, str):
                prov = tw
            else:
                cycle = tw.cycle if tw is not None else (fw[-1],)
                prov = PeriodicPlay(tuple(fw), cycle)
            if not isinstance(points.get(full), PeriodicPlay):
                points[full] = prov
    verts = extreme_points(points) if points else []
    levels = tuple(c.value_lo - eps for c in certs) if ir else None
    return PayoffPolytope(spec.n, tuple(verts), tuple(points[v] for v in verts), eps, tuple(sorted(points)), levels)


def folk_equilibrium(spec: GameSpec, target, epsilon, config: SolverConfig = DEFAULT_CONFIG, *, rounds: int | None = None, polytope: PayoffPolytope | None = None) -> EquilibriumArtifact:
    """Lottery over at most n+1 witnessed vertices approximating ``target``,
    each followed by grim trigger."""
    eps = to_fraction(epsilon)
    w = tuple(to_fraction(v) for v in target)
    if len(w) != spec.n:
        raise PreconditionError("target dimension differs from the player count")
    certs = all_minmax(spec, config)
    poly = polytope or payoff_set(spec, eps, config=config, certificates=certs)
    idx = [k for k in range(len(poly.vertices)) if poly.witness(k) is not None]
    if not idx:
        raise TargetOutsideError("target outside E approximation: no witnessed payoff vectors")
    pts = [poly.vertices[k] for k in idx]
    dist, lam = distance_to_hull(pts, w)
    if dist > eps:
        raise TargetOutsideError(f"target outside E approximation (distance {dist} > epsilon {eps})")
    chosen = caratheodory(pts, lam)
    plays = [poly.witness(idx[k]) for k, _ in chosen]
    weights = [wt for _, wt in chosen]
    if len(plays) == 1:
        R = 0
    elif rounds is not None:
        R = rounds
    else:
        R = dyadic_rounds(weights, config.jcl_round_cap)
        if R is None:
            R = min(10, config.jcl_round_cap)
    art = lottery_artifact(spec, plays, weights, R, eps, certs, config)
    art.notes.append(f"nearest hull point at distance {dist}")
    return art
