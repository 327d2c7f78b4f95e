"""Best unilateral deviations against a strategy automaton.

With the opponents' behaviour fixed by the automaton, player ``i`` faces a
finite Markov decision process whose states are the automaton states (the
automaton is deterministic given the observed profiles, so the player can
track it).  Values are computed exactly over the rationals.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import networkx as nx

from . import freqlp
from .chain import ProductChain, absorption_probabilities, mass_outside, payoff_distribution, recurrent_classes, stationary_distribution
from .config import DEFAULT_CONFIG, SolverConfig
from .errors import ResourceError, SolverError
from .lp import linprog, solve_exact
from .model import (
    FiniteHorizon,
    GameSpec,
    InfinitelyOften,
    LimsupFrequency,
    MixedProfile,
    StrategyAutomaton,
    ThresholdTable,
    combine,
    profile_distribution,
    to_fraction,
)

METHODS = ("mdp_exact", "policy_enum", "monte_carlo")


@dataclass(frozen=True, eq=False)
class DecisionProcess:
    """Player ``i``'s MDP against the automaton."""

    spec: GameSpec
    automaton: StrategyAutomaton
    player: int

    @cached_property
    def _opp(self) -> dict:
        out = {}
        for s in self.automaton.states:
            em = self.automaton.emission[s].exact()
            rest = MixedProfile({j: d for j, d in em.dists.items() if j != self.player})
            out[s] = rest.outcomes()
        return out

    def actions(self, s) -> tuple:
        return self.spec.actions[self.player]

    def outcomes(self, s, b) -> list:
        """``[(profile, probability)]`` when the player picks ``b`` in ``s``."""
        i = self.player
        res = []
        for assignment, p in self._opp[s]:
            prof = tuple(b if j == i else assignment[j] for j in range(self.spec.n))
            res.append((prof, Fraction(p)))
        return res

    def successors(self, s, b) -> dict:
        row = {}
        for a, p in self.outcomes(s, b):
            t = self.automaton.next(s, a)
            row[t] = row.get(t, Fraction(0)) + p
        return row

    @cached_property
    def states(self) -> list:
        seen, order, stack = {self.automaton.initial}, [self.automaton.initial], [self.automaton.initial]
        while stack:
            s = stack.pop()
            for b in self.actions(s):
                for t in self.successors(s, b):
                    if t not in seen:
                        seen.add(t)
                        order.append(t)
                        stack.append(t)
        return order

    @cached_property
    def table(self) -> dict:
        return {(s, b): self.successors(s, b) for s in self.states for b in self.actions(s)}

    def set_prob(self, s, b, S) -> Fraction:
        return sum((p for a, p in self.outcomes(s, b) if a in S), Fraction(0))


# ---------------------------------------------------------------- end components


def maximal_end_components(mdp: DecisionProcess) -> list:
    """List of ``(states, {state: allowed actions})``."""
    allowed = {s: list(mdp.actions(s)) for s in mdp.states}
    changed = True
    while changed:
        changed = False
        g = nx.DiGraph()
        g.add_nodes_from(s for s in allowed if allowed[s])
        for s, acts in allowed.items():
            for b in acts:
                for t in mdp.table[(s, b)]:
                    g.add_edge(s, t)
        comp = {}
        for k, c in enumerate(nx.strongly_connected_components(g)):
            for s in c:
                comp[s] = k
        for s in list(allowed):
            keep = [b for b in allowed[s] if all(comp.get(t) == comp.get(s) and allowed.get(t) for t in mdp.table[(s, b)])]
            if len(keep) != len(allowed[s]):
                allowed[s] = keep
                changed = True
    groups = {}
    for s, acts in allowed.items():
        if acts:
            groups.setdefault(comp[s], []).append(s)
    order = {s: k for k, s in enumerate(mdp.states)}
    out = []
    for members in groups.values():
        # a trivial SCC without a self-loop has no allowed action left
        members = sorted(members, key=order.__getitem__)
        out.append((members, {s: allowed[s] for s in members}))
    out.sort(key=lambda x: order[x[0][0]])
    return out


def _mec_flow_best(mdp, mec, objective) -> Fraction:
    """Best payoff achievable by staying forever in an end component."""
    states, allowed = mec
    vars_ = [(s, b) for s in states for b in allowed[s]]
    eqs = [({v: Fraction(1) for v in vars_}, Fraction(1))]
    for t in states:
        form = {}
        for (s, b) in vars_:
            p = mdp.table[(s, b)].get(t, Fraction(0))
            if s == t:
                form[(s, b)] = form.get((s, b), Fraction(0)) + 1
            if p:
                form[(s, b)] = form.get((s, b), Fraction(0)) - p
        eqs.append((form, Fraction(0)))

    def form_of(S):
        return {(s, b): mdp.set_prob(s, b, S) for (s, b) in vars_ if mdp.set_prob(s, b, S)}

    if isinstance(objective, InfinitelyOften):
        return Fraction(int(any(mdp.set_prob(s, b, objective.U) > 0 for s, b in vars_)))
    if isinstance(objective, LimsupFrequency):
        sol = freqlp.solve(vars_, eqs, [], objective=form_of(objective.U))
        return sum((c * sol[0][v] for v, c in form_of(objective.U).items()), Fraction(0))
    if isinstance(objective, ThresholdTable):
        for k in sorted(range(len(objective.rules) + 1), key=lambda k: -objective.outcomes()[k]):
            if freqlp.solve(vars_, eqs, freqlp.pattern_ineqs(objective, k, form_of)) is not None:
                return objective.outcomes()[k]
        raise SolverError("no activation pattern feasible in end component")
    raise SolverError(f"unsupported objective {objective.kind}")


def max_terminal_value(mdp: DecisionProcess, terminal: dict) -> dict:
    """Largest expected terminal reward when each end-component state
    ``s`` may stop with ``terminal[s]``: least solution of
    ``x_s >= sum p x_t``, ``x_s >= terminal[s]`` (an LP)."""
    states = mdp.states
    idx = {s: k for k, s in enumerate(states)}
    n = len(states)
    A_ub, b_ub = [], []
    for s in states:
        for b in mdp.actions(s):
            row = [Fraction(0)] * n
            row[idx[s]] -= 1
            for t, p in mdp.table[(s, b)].items():
                row[idx[t]] += p
            A_ub.append(row)
            b_ub.append(Fraction(0))
        if s in terminal:
            row = [Fraction(0)] * n
            row[idx[s]] = Fraction(-1)
            A_ub.append(row)
            b_ub.append(-terminal[s])
    # substitute x = y + shift so the LP variables y stay nonnegative
    shift = min([Fraction(0)] + list(terminal.values()))
    b_ub = [b - shift * sum(row) for row, b in zip(A_ub, b_ub)]
    res = linprog([Fraction(-1)] * n, A_ub, b_ub)
    if not res.optimal:
        raise SolverError(f"terminal-value LP {res.status}")
    return {s: res.x[idx[s]] + shift for s in states}


# ---------------------------------------------------------------- policy iteration


def _chain_gain_bias(states, kernel, reward):
    classes = recurrent_classes(states, kernel)
    member = {s: k for k, c in enumerate(classes) for s in c}
    gains = []
    h = {}
    for c in classes:
        pi = stationary_distribution(c, kernel)
        gk = sum((pi[s] * reward[s] for s in c), Fraction(0))
        gains.append(gk)
        idx = {s: k for k, s in enumerate(c)}
        n = len(c)
        A = [[Fraction(0)] * n for _ in range(n)]
        b = [Fraction(0)] * n
        for s in c:
            A[idx[s]][idx[s]] += 1
            for t, p in kernel[s].items():
                A[idx[s]][idx[t]] -= p
            b[idx[s]] = reward[s] - gk
        A[-1] = [pi[s] for s in c]
        b[-1] = Fraction(0)
        x = solve_exact(A, b)
        if x is None:
            raise SolverError("bias system singular")
        h.update({s: x[idx[s]] for s in c})
    absorb = absorption_probabilities(states, kernel, classes)
    g = {s: sum((q * gk for q, gk in zip(absorb[s], gains)), Fraction(0)) for s in states}
    trans = [s for s in states if s not in member]
    if trans:
        idx = {s: k for k, s in enumerate(trans)}
        n = len(trans)
        A = [[Fraction(0)] * n for _ in range(n)]
        b = [Fraction(0)] * n
        for s in trans:
            A[idx[s]][idx[s]] += 1
            rhs = reward[s] - g[s]
            for t, p in kernel[s].items():
                if t in idx:
                    A[idx[s]][idx[t]] -= p
                else:
                    rhs += p * h[t]
            b[idx[s]] = rhs
        x = solve_exact(A, b)
        if x is None:
            raise SolverError("transient bias system singular")
        h.update({s: x[idx[s]] for s in trans})
    return g, h


def policy_iteration(mdp: DecisionProcess, reward, max_iter: int = 10_000):
    """Exact multichain policy iteration for the long-run average of
    ``reward[(s, b)]``.  Returns ``(gain by state, policy)``."""
    states = mdp.states
    policy = {s: mdp.actions(s)[0] for s in states}
    for _ in range(max_iter):
        kernel = {s: mdp.table[(s, policy[s])] for s in states}
        r = {s: reward[(s, policy[s])] for s in states}
        g, h = _chain_gain_bias(states, kernel, r)
        changed = False
        new = dict(policy)
        for s in states:
            pg = {b: sum((p * g[t] for t, p in mdp.table[(s, b)].items()), Fraction(0)) for b in mdp.actions(s)}
            best = max(pg.values())
            if pg[policy[s]] < best:
                new[s] = next(b for b in mdp.actions(s) if pg[b] == best)
                changed = True
        if not changed:
            for s in states:
                pg = {b: sum((p * g[t] for t, p in mdp.table[(s, b)].items()), Fraction(0)) for b in mdp.actions(s)}
                best = max(pg.values())
                cand = [b for b in mdp.actions(s) if pg[b] == best]
                val = {b: reward[(s, b)] + sum((p * h[t] for t, p in mdp.table[(s, b)].items()), Fraction(0)) for b in cand}
                top = max(val.values())
                if val.get(policy[s], None) is None or val[policy[s]] < top:
                    new[s] = next(b for b in cand if val[b] == top)
                    changed = True
        if not changed:
            return g, policy
        policy = new
    raise SolverError("policy iteration did not converge")


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class DeviationClass:
    """Deviations whose choice may depend on the automaton state, a clock
    saturating at ``horizon`` and a private memory of ``memory`` cells."""

    memory: int = 1
    horizon: int = 0

    def describe(self) -> str:
        return f"memory={self.memory}, horizon={self.horizon}"


@dataclass
class DeviationReport:
    player: int
    best_value: Fraction
    on_path: Fraction
    gain: Fraction
    descriptor: str
    method: str
    notes: tuple = ()

    def to_json(self, spec: GameSpec) -> dict:
        return {
            "player": spec.players[self.player],
            "best_value": str(self.best_value),
            "on_path": str(self.on_path),
            "gain": str(self.gain),
            "gain_float": float(self.gain),
            "deviation_class": self.descriptor,
            "method": self.method,
            "notes": list(self.notes),
        }


def on_path_payoff(spec: GameSpec, automaton: StrategyAutomaton, i: int) -> Fraction:
    dist = payoff_distribution(spec, automaton)
    return sum((p * v[i] for p, v in dist), Fraction(0))


def _finite_horizon_value(spec, automaton, i) -> Fraction:
    obj = spec.objectives[i]
    mdp = DecisionProcess(spec, automaton, i)

    def value(s, h):
        if len(h) == obj.m:
            return obj.table[h]
        best = None
        for b in mdp.actions(s):
            v = sum((p * value(automaton.next(s, a), h + (a,)) for a, p in mdp.outcomes(s, b)), Fraction(0))
            best = v if best is None or v > best else best
        return best

    return value(automaton.initial, ())


def best_deviation_value(spec: GameSpec, automaton: StrategyAutomaton, i: int, route: str = "policy_iteration"):
    """Exact supremum of player ``i``'s expected payoff over her strategies.

    ``route`` selects, for limsup frequency objectives, multichain policy
    iteration or the end-component linear program; other families always
    use end components (or backward induction for finite horizons).
    """
    obj = spec.objectives[i]
    if isinstance(obj, FiniteHorizon):
        return _finite_horizon_value(spec, automaton, i), "backward induction"
    mdp = DecisionProcess(spec, automaton, i)
    if isinstance(obj, LimsupFrequency) and route == "policy_iteration":
        reward = {(s, b): mdp.set_prob(s, b, obj.U) for s in mdp.states for b in mdp.actions(s)}
        g, _ = policy_iteration(mdp, reward)
        return g[automaton.initial], "multichain policy iteration"
    terminal = {}
    for mec in maximal_end_components(mdp):
        v = _mec_flow_best(mdp, mec, obj)
        for s in mec[0]:
            terminal[s] = max(terminal.get(s, v), v)
    values = max_terminal_value(mdp, terminal)
    return values[automaton.initial], "end components + terminal-value LP"


def _policy_automaton(spec, automaton, i, dclass, policy):
    """Automaton over augmented states ``(state, clock, memory)`` where
    player ``i`` follows ``policy``."""
    T = dclass.horizon

    def name(x):
        return f"{x[0]}#{x[1]}#{x[2]}"

    start = (automaton.initial, 0, 0)
    states, emission, transition = [], {}, {}
    stack = [start]
    seen = {start}
    while stack:
        x = stack.pop()
        s, c, m = x
        b, m2 = policy[x]
        em = automaton.emission[s].exact()
        emission[name(x)] = MixedProfile({**{j: d for j, d in em.dists.items() if j != i}, i: {b: Fraction(1)}})
        states.append(name(x))
        support = {a for a, p in profile_distribution(spec, emission[name(x)]) if p > 0}
        for a in spec.profiles:
            if a not in support:
                # probability zero; any existing target keeps the map total
                transition[(name(x), a)] = name(x)
                continue
            y = (automaton.next(s, a), min(c + 1, T), m2)
            transition[(name(x), a)] = name(y)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return StrategyAutomaton(tuple(states), name(start), emission, transition)


def policy_enumeration(spec: GameSpec, automaton: StrategyAutomaton, i: int, dclass: DeviationClass = DeviationClass(), config: SolverConfig = DEFAULT_CONFIG):
    """Brute force over deterministic policies of the deviation class;
    returns ``(best value, best policy)``."""
    mdp = DecisionProcess(spec, automaton, i)
    aug = [(s, c, m) for s in mdp.states for c in range(dclass.horizon + 1) for m in range(dclass.memory)]
    choices = [(b, m) for b in spec.actions[i] for m in range(dclass.memory)]
    count = len(choices) ** len(aug)
    if count > config.policy_enum_cap:
        raise ResourceError(f"{count} policies exceed cap {config.policy_enum_cap}")
    best = None
    for combo in itertools.product(choices, repeat=len(aug)):
        policy = dict(zip(aug, combo))
        auto = _policy_automaton(spec, automaton, i, dclass, policy)
        v = sum((p * vec[i] for p, vec in payoff_distribution(spec, auto)), Fraction(0))
        if best is None or v > best[0]:
            best = (v, policy)
    return best


def deviation_gain(
    spec: GameSpec,
    automaton: StrategyAutomaton,
    i: int,
    dclass: DeviationClass = DeviationClass(),
    method: str = "mdp_exact",
    config: SolverConfig = DEFAULT_CONFIG,
) -> DeviationReport:
    automaton.validate(spec)
    on_path = on_path_payoff(spec, automaton, i)
    obj = spec.objectives[i]
    notes = []
    if method == "mdp_exact":
        best, how = best_deviation_value(spec, automaton, i)
        descriptor = f"all strategies ({how})"
        if isinstance(obj, ThresholdTable):
            notes.append("threshold tables: limiting frequencies restricted to end-component flows")
    elif method == "policy_enum":
        best, _ = policy_enumeration(spec, automaton, i, dclass, config)
        descriptor = "deterministic policies, " + dclass.describe()
    else:
        raise ValueError(f"unknown method {method!r}")
    return DeviationReport(i, best, on_path, best - on_path, descriptor, method, tuple(notes))


@dataclass
class VerificationReport:
    epsilon: Fraction
    deviations: list
    passed: bool
    max_gain: Fraction
    payoffs: tuple
    concentration_mass: Fraction | None
    concentration_bound: float | None
    concentration_ok: bool | None

    def to_json(self, spec: GameSpec) -> dict:
        return {
            "epsilon": str(self.epsilon),
            "payoffs": [str(v) for v in self.payoffs],
            "deviations": [d.to_json(spec) for d in self.deviations],
            "max_gain": str(self.max_gain),
            "max_gain_float": float(self.max_gain),
            "passed": self.passed,
            "concentration_check": {
                "mass_outside": None if self.concentration_mass is None else str(self.concentration_mass),
                "bound": self.concentration_bound,
                "ok": self.concentration_ok,
            },
        }


PASS_TOL = 1e-6


def verify_equilibrium(spec: GameSpec, artifact, epsilon, config: SolverConfig = DEFAULT_CONFIG) -> VerificationReport:
    """Pass iff every player's best deviation gains at most epsilon (plus
    1e-6).  Also reports the probability that some player ends below
    ``v_i - epsilon^(1/3)``, which should stay under ``n * epsilon^(1/3)``."""
    eps = to_fraction(epsilon)
    auto = artifact.automaton if hasattr(artifact, "automaton") else artifact
    reports = [deviation_gain(spec, auto, i, config=config) for i in range(spec.n)]
    max_gain = max(r.gain for r in reports)
    dist = payoff_distribution(spec, auto)
    payoffs = tuple(sum((p * v[i] for p, v in dist), Fraction(0)) for i in range(spec.n))
    mass = bound = ok = None
    certs = getattr(artifact, "certificates", None)
    if eps > 0 and certs:
        delta = float(eps) ** (1 / 3)
        levels = [Fraction(c.value_hi) - Fraction(delta) for c in certs]
        mass = sum((p for p, v in dist if any(x < l for x, l in zip(v, levels))), Fraction(0))
        bound = spec.n * delta
        ok = float(mass) < bound
    return VerificationReport(eps, reports, float(max_gain) <= float(eps) + PASS_TOL, max_gain, payoffs, mass, bound, ok)
