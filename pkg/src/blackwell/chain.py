"""Exact analysis of the Markov chain a strategy automaton induces."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import networkx as nx

from .errors import SolverError
from .lp import solve_exact
from .model import (
    FiniteHorizon,
    GameSpec,
    StrategyAutomaton,
    evaluate_frequency,
    evaluate_history,
    is_tail,
    profile_distribution,
)


def stationary_distribution(states, kernel) -> dict:
    """Unique stationary distribution of an irreducible chain on ``states``;
    ``kernel[s]`` maps successors to probabilities."""
    states = list(states)
    if len(states) == 1:
        return {states[0]: Fraction(1)}
    idx = {s: k for k, s in enumerate(states)}
    n = len(states)
    # pi (P - I) = 0 with one equation replaced by sum pi = 1
    A = [[Fraction(0)] * n for _ in range(n)]
    for s in states:
        for t, p in kernel[s].items():
            if t in idx:
                A[idx[t]][idx[s]] += p
        A[idx[s]][idx[s]] -= 1
    A[-1] = [Fraction(1)] * n
    b = [Fraction(0)] * (n - 1) + [Fraction(1)]
    pi = solve_exact(A, b)
    if pi is None:
        raise SolverError("stationary system is singular")
    return dict(zip(states, pi))


def recurrent_classes(states, kernel) -> list:
    """Closed communicating classes (bottom strongly connected components),
    each as a sorted list, in order of first appearance in ``states``."""
    g = nx.DiGraph()
    g.add_nodes_from(states)
    for s in states:
        for t, p in kernel[s].items():
            if p > 0:
                g.add_edge(s, t)
    cond = nx.condensation(g)
    order = {s: k for k, s in enumerate(states)}
    out = []
    for c in cond.nodes:
        if cond.out_degree(c) == 0:
            members = sorted(cond.nodes[c]["members"], key=order.__getitem__)
            out.append(members)
    out.sort(key=lambda m: order[m[0]])
    return out


def absorption_probabilities(states, kernel, classes) -> dict:
    """``state -> [P(absorbed in class k)]`` solved exactly, processing
    strongly connected components from the sinks upward."""
    member = {s: k for k, c in enumerate(classes) for s in c}
    K = len(classes)
    result = {s: [Fraction(int(member[s] == k)) for k in range(K)] for s in member}
    g = nx.DiGraph()
    g.add_nodes_from(states)
    for s in states:
        for t, p in kernel[s].items():
            if p > 0:
                g.add_edge(s, t)
    cond = nx.condensation(g)
    for c in reversed(list(nx.topological_sort(cond))):
        comp = [s for s in cond.nodes[c]["members"] if s not in member]
        if not comp:
            continue
        idx = {s: k for k, s in enumerate(comp)}
        n = len(comp)
        A = [[Fraction(0)] * n for _ in range(n)]
        B = [[Fraction(0)] * K for _ in range(n)]
        for s in comp:
            A[idx[s]][idx[s]] += 1
            for t, p in kernel[s].items():
                if t in idx:
                    A[idx[s]][idx[t]] -= p
                else:
                    for k in range(K):
                        B[idx[s]][k] += p * result[t][k]
        for k in range(K):
            x = solve_exact(A, [row[k] for row in B])
            if x is None:
                raise SolverError("transient system is singular")
            for s in comp:
                result.setdefault(s, [Fraction(0)] * K)[k] = x[idx[s]]
    return result


@dataclass(frozen=True, eq=False)
class ProductChain:
    """Chain over the automaton states reachable from ``start``."""

    spec: GameSpec
    automaton: StrategyAutomaton
    start: str

    @classmethod
    def build(cls, spec: GameSpec, automaton: StrategyAutomaton, start: str | None = None) -> "ProductChain":
        automaton.validate(spec)
        return cls(spec, automaton, automaton.initial if start is None else start)

    @cached_property
    def states(self) -> list:
        return self.automaton.reachable(self.spec, self.start)

    @cached_property
    def emissions(self) -> dict:
        return {s: [(a, Fraction(p)) for a, p in profile_distribution(self.spec, self.automaton.emission[s].exact()) if p > 0] for s in self.states}

    @cached_property
    def kernel(self) -> dict:
        out = {}
        for s in self.states:
            row = {}
            for a, p in self.emissions[s]:
                t = self.automaton.next(s, a)
                row[t] = row.get(t, Fraction(0)) + p
            out[s] = row
        return out

    @cached_property
    def classes(self) -> list:
        return recurrent_classes(self.states, self.kernel)

    @cached_property
    def stationary(self) -> list:
        return [stationary_distribution(c, self.kernel) for c in self.classes]

    @cached_property
    def absorption(self) -> dict:
        return absorption_probabilities(self.states, self.kernel, self.classes)

    def class_frequency(self, k: int) -> dict:
        """Almost-sure limiting profile frequencies inside class ``k``."""
        freq = {}
        for s, w in self.stationary[k].items():
            for a, p in self.emissions[s]:
                freq[a] = freq.get(a, Fraction(0)) + w * p
        return freq

    def check(self, tol: float = 1e-9) -> None:
        for s, row in self.kernel.items():
            if abs(float(sum(row.values())) - 1) > 1e-12:
                raise SolverError(f"kernel row {s} does not sum to 1")
        for c, pi in zip(self.classes, self.stationary):
            for t in c:
                flow = sum(pi[s] * self.kernel[s].get(t, 0) for s in c)
                if abs(float(flow - pi[t])) > tol:
                    raise SolverError("stationary equation violated")

    def horizon_distribution(self, m: int) -> dict:
        """``(state after m stages, history of length m) -> probability``."""
        layer = {(self.start, ()): Fraction(1)}
        for _ in range(m):
            nxt = {}
            for (s, h), p in layer.items():
                for a, q in self.emissions[s]:
                    key = (self.automaton.next(s, a), h + (a,))
                    nxt[key] = nxt.get(key, Fraction(0)) + p * q
            layer = nxt
        return layer


def payoff_distribution(spec: GameSpec, automaton: StrategyAutomaton, chain: ProductChain | None = None) -> list:
    """Exact distribution of the payoff vector: ``[(probability, vector)]``,
    merged over equal vectors and sorted by vector."""
    chain = chain or ProductChain.build(spec, automaton)
    class_payoffs = []
    for k in range(len(chain.classes)):
        freq = chain.class_frequency(k)
        class_payoffs.append([evaluate_frequency(o, freq) if is_tail(o) else None for o in spec.objectives])
    M = spec.max_horizon
    layer = chain.horizon_distribution(M) if M else {(chain.start, ()): Fraction(1)}
    out = {}
    for (s, h), p in layer.items():
        for k, q in enumerate(chain.absorption[s]):
            if q == 0:
                continue
            vec = tuple(
                class_payoffs[k][i] if is_tail(o) else evaluate_history(o, h)
                for i, o in enumerate(spec.objectives)
            )
            out[vec] = out.get(vec, Fraction(0)) + p * q
    return sorted(((p, v) for v, p in out.items()), key=lambda x: x[1])


def exact_payoffs(spec: GameSpec, automaton: StrategyAutomaton) -> tuple:
    dist = payoff_distribution(spec, automaton)
    return tuple(sum((p * v[i] for p, v in dist), Fraction(0)) for i in range(spec.n))


def mass_outside(spec: GameSpec, automaton: StrategyAutomaton, levels) -> Fraction:
    """Probability that some player's realised payoff is below ``levels[i]``."""
    return sum((p for p, v in payoff_distribution(spec, automaton) if any(x < l for x, l in zip(v, levels))), Fraction(0))
