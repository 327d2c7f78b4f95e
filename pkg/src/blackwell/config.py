"""Tunable knobs shared by the solvers."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field


@dataclass(frozen=True)
class SolverConfig:
    # separates d_i > 0 from d_i = 0 for the 0-1 law
    tau: float = 1e-6
    # n >= 3 stage minmax: random restarts of alternating minimisation
    multistart: int = 8
    alternating_iters: int = 50
    seed: int = 0
    # largest cycle length tried when realising a frequency vector
    denominator_cap: int = 64
    # threshold-table minmax: grid resolution over opponents' simplices
    punishment_grid: int = 4
    # largest |A|^m enumerated by clopen truncations and finite-horizon search
    enumeration_cap: int = 200_000
    jcl_round_cap: int = 16
    # policy enumeration in the deviation oracle
    policy_enum_cap: int = 1_000_000
    # epsilon grid for approximating the equilibrium payoff set
    epsilon_grid: tuple = field(default=(0.2, 0.1, 0.05))


DEFAULT_CONFIG = SolverConfig()


def thread_count() -> int:
    """Worker cap from ``BLACKWELL_THREADS`` (default 1)."""
    raw = os.environ.get("BLACKWELL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn, items) -> list:
    """Order-preserving map; results never depend on the worker count."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
