"""Seeded Monte Carlo rollouts of strategy automata.

Every replication ``r`` draws its uniforms from ``default_rng([seed, r])``,
so results do not depend on how replications are split across threads.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import parallel_map, thread_count
from .model import (
    FiniteHorizon,
    GameSpec,
    InfinitelyOften,
    LimsupFrequency,
    MixedProfile,
    StrategyAutomaton,
    ThresholdTable,
)

Z95 = 1.959963984540054


@dataclass
class MonteCarloResult:
    mean: np.ndarray
    stderr: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    horizon: int
    reps: int
    seed: int
    labels: tuple  # per player: how the payoff was estimated

    def to_json(self, spec: GameSpec) -> dict:
        return {
            "horizon": self.horizon,
            "reps": self.reps,
            "seed": self.seed,
            "players": [
                {
                    "player": spec.players[i],
                    "estimate": float(self.mean[i]),
                    "stderr": float(self.stderr[i]),
                    "ci95": [float(self.ci_low[i]), float(self.ci_high[i])],
                    "estimator": self.labels[i],
                }
                for i in range(spec.n)
            ],
        }


class _Compiled:
    """Array form of an automaton: per-state cumulative action
    distributions and a successor table indexed by profile number."""

    def __init__(self, spec: GameSpec, automaton: StrategyAutomaton):
        self.spec = spec
        self.names = list(automaton.states)
        idx = {s: k for k, s in enumerate(self.names)}
        width = max(len(a) for a in spec.actions)
        self.cdf = np.ones((len(self.names), spec.n, width))
        for k, s in enumerate(self.names):
            em = automaton.emission[s]
            for j in range(spec.n):
                probs = np.array([float(em.prob(j, a)) for a in spec.actions[j]])
                probs = probs / probs.sum()
                c = np.cumsum(probs)
                c[-1] = 1.0
                self.cdf[k, j, : len(c)] = c
        self.radix = np.array([int(np.prod([len(a) for a in spec.actions[j + 1:]])) for j in range(spec.n)], dtype=np.int64)
        self.next = np.zeros((len(self.names), len(spec.profiles)), dtype=np.int64)
        for k, s in enumerate(self.names):
            for p, a in enumerate(spec.profiles):
                self.next[k, p] = idx[automaton.next(s, a)]
        self.initial = idx[automaton.initial]


def _rollouts(comp: _Compiled, T: int, seed: int, reps: range, keep_prefix: int):
    """Profile counts over the whole run and over its second half, plus the
    first ``keep_prefix`` profile numbers, for each replication."""
    spec = comp.spec
    N = len(reps)
    P = len(spec.profiles)
    U = np.stack([np.random.default_rng([seed, r]).random((T, spec.n)) for r in reps]) if N else np.zeros((0, T, spec.n))
    state = np.full(N, comp.initial, dtype=np.int64)
    counts = np.zeros((N, P), dtype=np.int64)
    late = np.zeros((N, P), dtype=np.int64)
    prefix = np.zeros((N, keep_prefix), dtype=np.int64)
    rows = np.arange(N)
    half = T - T // 2
    for t in range(T):
        prof = np.zeros(N, dtype=np.int64)
        for j in range(spec.n):
            c = comp.cdf[state, j, :]
            act = (U[:, t, j][:, None] >= c).sum(axis=1)
            act = np.minimum(act, len(spec.actions[j]) - 1)
            prof += act * comp.radix[j]
        counts[rows, prof] += 1
        if t >= half:
            late[rows, prof] += 1
        if t < keep_prefix:
            prefix[:, t] = prof
        state = comp.next[state, prof]
    return counts, late, prefix


def _chunks(N: int, k: int) -> list:
    size = -(-N // k)
    return [range(a, min(a + size, N)) for a in range(0, N, size)] if N else []


def simulate(spec: GameSpec, automaton: StrategyAutomaton, horizon: int, reps: int, seed: int):
    """Raw per-replication payoff samples ``(samples[N, n], labels)``."""
    if horizon < 1 or reps < 1:
        raise ValueError("horizon and reps must be at least 1")
    comp = _Compiled(spec, automaton)
    keep = spec.max_horizon
    if keep > horizon:
        raise ValueError(f"horizon {horizon} shorter than the finite-horizon objectives ({keep})")
    parts = parallel_map(lambda rr: _rollouts(comp, horizon, seed, rr, keep), _chunks(reps, thread_count()))
    counts = np.concatenate([p[0] for p in parts])
    late = np.concatenate([p[1] for p in parts])
    prefix = np.concatenate([p[2] for p in parts])
    freq = counts / horizon
    index = {a: k for k, a in enumerate(spec.profiles)}
    samples = np.zeros((reps, spec.n))
    labels = []
    for i, obj in enumerate(spec.objectives):
        if isinstance(obj, InfinitelyOften):
            cols = [index[a] for a in obj.U]
            samples[:, i] = (late[:, cols].sum(axis=1) > 0) if cols else 0.0
            labels.append("proxy: won in final T/2 stages")
        elif isinstance(obj, LimsupFrequency):
            cols = [index[a] for a in obj.U]
            samples[:, i] = freq[:, cols].sum(axis=1) if cols else 0.0
            labels.append("empirical frequency at horizon T")
        elif isinstance(obj, ThresholdTable):
            out = np.full(reps, float(obj.default))
            decided = np.zeros(reps, dtype=bool)
            for cond, payoff in obj.rules:
                c = counts[:, [index[a] for a in cond.profile_set]].sum(axis=1)
                if cond.relation == "equals_one":
                    hit = c == horizon
                elif cond.relation == "greater":
                    hit = c / horizon > float(cond.threshold)
                else:
                    hit = c / horizon >= float(cond.threshold)
                take = hit & ~decided
                out[take] = float(payoff)
                decided |= hit
            samples[:, i] = out
            labels.append("threshold table at empirical horizon-T frequencies")
        elif isinstance(obj, FiniteHorizon):
            table = {tuple(index[a] for a in h): float(v) for h, v in obj.table.items()}
            samples[:, i] = [table[tuple(row[: obj.m])] for row in prefix.tolist()]
            labels.append("exact: first m stages")
    return samples, tuple(labels)


def summarize(samples: np.ndarray) -> tuple:
    N = samples.shape[0]
    mean = samples.mean(axis=0)
    sd = samples.std(axis=0, ddof=1) if N > 1 else np.zeros(samples.shape[1])
    se = sd / np.sqrt(N)
    return mean, se, mean - Z95 * se, mean + Z95 * se


def monte_carlo(spec: GameSpec, automaton: StrategyAutomaton, horizon: int, reps: int, seed: int) -> MonteCarloResult:
    samples, labels = simulate(spec, automaton, horizon, reps, seed)
    mean, se, lo, hi = summarize(samples)
    return MonteCarloResult(mean, se, lo, hi, horizon, reps, seed, labels)


def block_win_probability(spec: GameSpec, schedule, response: MixedProfile, punishment: MixedProfile, blocks: int, reps: int, seed: int) -> tuple:
    """Estimate the probability that the scheduled player wins at least once
    in each of the first ``blocks`` blocks when she plays ``response`` and
    the opponents play ``punishment`` i.i.d. every stage.

    Returns ``(estimate, stderr)``.
    """
    i = schedule.player
    U = spec.objectives[i].U
    T = schedule.cut(blocks)
    mixed = {**punishment.dists, **response.dists}
    auto = StrategyAutomaton(("s",), "s", {"s": MixedProfile(mixed)}, {("s", a): "s" for a in spec.profiles})
    comp = _Compiled(spec, auto)
    win = np.array([a in U for a in spec.profiles])
    ok = np.ones(reps, dtype=bool)
    parts = parallel_map(lambda rr: _block_hits(comp, T, seed, rr, win, schedule, blocks), _chunks(reps, thread_count()))
    ok = np.concatenate(parts)
    p = ok.mean()
    se = np.sqrt(p * (1 - p) / reps)
    return float(p), float(se)


def _block_hits(comp, T, seed, reps, win, schedule, blocks):
    _, _, prefix = _rollouts(comp, T, seed, reps, T)
    hits = win[prefix]
    ok = np.ones(len(reps), dtype=bool)
    for n in range(blocks):
        ok &= hits[:, schedule.cut(n): schedule.cut(n + 1)].any(axis=1)
    return ok
