"""Minmax values and punishments for the one-shot stage game."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .config import DEFAULT_CONFIG, SolverConfig, parallel_map
from .errors import PreconditionError, SolverError
from .lp import linprog
from .model import GameSpec, MixedProfile, to_fraction

GAP_TOL = 1e-9
METHODS = ("lp_exact", "alternating", "exhaustive_pure")


@dataclass(frozen=True, eq=False)
class StageReward:
    """One-shot reward of player ``player``: a total map profile -> value."""

    player: int
    values: Mapping

    def __call__(self, profile) -> Fraction:
        return self.values[profile]


def indicator_reward(spec: GameSpec, i: int, U) -> StageReward:
    U = frozenset(U)
    return StageReward(i, {a: Fraction(int(a in U)) for a in spec.profiles})


def constant_reward(spec: GameSpec, i: int, c) -> StageReward:
    c = to_fraction(c)
    return StageReward(i, {a: c for a in spec.profiles})


@dataclass(frozen=True, eq=False)
class MinmaxCertificate:
    value_lo: object
    value_hi: object
    punishment: MixedProfile
    method: str
    tolerance: float
    notes: tuple = field(default=())

    @property
    def exact(self) -> bool:
        return self.value_lo == self.value_hi

    @property
    def value(self):
        if not self.exact:
            raise PreconditionError(f"value only bracketed: [{self.value_lo}, {self.value_hi}]")
        return self.value_lo

    def to_json(self, spec: GameSpec) -> dict:
        return {
            "value_lo": _num(self.value_lo),
            "value_hi": _num(self.value_hi),
            "punishment": self.punishment.to_json(spec),
            "method": self.method,
            "tolerance": self.tolerance,
            "notes": list(self.notes),
        }


def _num(x):
    return str(x) if isinstance(x, Fraction) else x


# ---------------------------------------------------------------- matrix games


@dataclass(frozen=True)
class MatrixGameSolution:
    value: object
    row: tuple
    col: tuple
    lower: object  # what the row strategy guarantees
    upper: object  # what the column strategy concedes

    @property
    def gap(self):
        return self.upper - self.lower

    def __iter__(self):
        return iter((self.value, self.row, self.col))


def matrix_game_solve(M) -> MatrixGameSolution:
    """Zero-sum game where the row player maximises ``M[r][c]``."""
    M = [list(r) for r in M]
    if not M or not M[0] or any(len(r) != len(M[0]) for r in M):
        raise PreconditionError("matrix must be nonempty and rectangular")
    nr, nc = len(M), len(M[0])
    flat = [v for r in M for v in r]
    if any(isinstance(v, float) and v != v or v in (float("inf"), float("-inf")) for v in flat):
        raise PreconditionError("matrix entries must be finite")
    shift = 1 - min(flat)
    Ms = [[v + shift for v in r] for r in M]

    # row player: max v  s.t.  v <= sum_i x_i M[i][j]  for all j, sum x = 1
    c = [0] * nr + [1]
    A_ub = [[-Ms[i][j] for i in range(nr)] + [1] for j in range(nc)]
    A_eq = [[1] * nr + [0]]
    res_r = linprog(c, A_ub, [0] * nc, A_eq, [1])
    # column player: max -w  s.t.  sum_j M[i][j] y_j <= w for all i, sum y = 1
    c = [0] * nc + [-1]
    A_ub = [[Ms[i][j] for j in range(nc)] + [-1] for i in range(nr)]
    A_eq = [[1] * nc + [0]]
    res_c = linprog(c, A_ub, [0] * nr, A_eq, [1])
    if not (res_r.optimal and res_c.optimal):
        raise SolverError(f"matrix game LP failed ({res_r.status}, {res_c.status})")
    x = _clean(res_r.x[:nr])
    y = _clean(res_c.x[:nc])
    lower = min(sum(x[i] * M[i][j] for i in range(nr)) for j in range(nc))
    upper = max(sum(M[i][j] * y[j] for j in range(nc)) for i in range(nr))
    if upper - lower > GAP_TOL:
        raise SolverError(f"duality gap {float(upper - lower):.3g} exceeds {GAP_TOL}")
    value = lower if lower == upper else (lower + upper) / 2
    return MatrixGameSolution(value, tuple(x), tuple(y), lower, upper)


def _clean(p):
    if all(isinstance(v, Fraction) for v in p):
        total = sum(p)
        return [v / total for v in p]
    p = [max(0.0, float(v)) for v in p]
    total = sum(p)
    return [v / total for v in p]


# ---------------------------------------------------------------- stage values


def expected_reward(spec: GameSpec, i: int, r: StageReward, own_action: str, x_minus_i: MixedProfile):
    total = 0
    for assignment, p in x_minus_i.outcomes():
        assignment = dict(assignment)
        assignment[i] = own_action
        total += p * r(tuple(assignment[j] for j in range(spec.n)))
    return total


def best_response_value(spec: GameSpec, i: int, r: StageReward, x_minus_i: MixedProfile):
    """Best pure reply of player ``i``; ties go to the lowest action index."""
    x_minus_i.validate(spec, spec.opponents(i))
    best = None
    for a in spec.actions[i]:
        v = expected_reward(spec, i, r, a, x_minus_i)
        if best is None or v > best[0]:
            best = (v, a)
    return best


def _check_reward(spec: GameSpec, r: StageReward) -> None:
    for a in spec.profiles:
        if a not in r.values:
            raise PreconditionError(f"stage reward undefined at {a!r}")
        v = r.values[a]
        if isinstance(v, float) and (v != v or abs(v) == float("inf")):
            raise PreconditionError("stage reward entries must be finite")


def stage_minmax(spec: GameSpec, i: int, r: StageReward, config: SolverConfig = DEFAULT_CONFIG) -> MinmaxCertificate:
    _check_reward(spec, r)
    opp = spec.opponents(i)
    if not opp:
        v = max(r((a,)) for a in spec.actions[i])
        return MinmaxCertificate(v, v, MixedProfile({}), "exhaustive_pure", 0.0)
    if len(opp) == 1:
        j = opp[0]
        M = [[r(_profile(spec, {i: ai, j: aj})) for aj in spec.actions[j]] for ai in spec.actions[i]]
        sol = matrix_game_solve(M)
        pun = MixedProfile({j: {a: p for a, p in zip(spec.actions[j], sol.col) if p > 0}})
        return MinmaxCertificate(sol.lower, sol.upper, pun, "lp_exact", GAP_TOL)
    return _multi_opponent_minmax(spec, i, r, opp, config)


def _profile(spec: GameSpec, assignment) -> tuple:
    return tuple(assignment[j] for j in range(spec.n))


def correlated_lower_bound(spec: GameSpec, i: int, r: StageReward):
    """Value of the matrix game against the opponents' *joint* profile; the
    opponents mixing independently can only do worse, so this bounds the
    minmax from below."""
    opp = spec.opponents(i)
    cols = list(itertools.product(*(spec.actions[j] for j in opp)))
    M = []
    for ai in spec.actions[i]:
        row = []
        for c in cols:
            assignment = dict(zip(opp, c))
            assignment[i] = ai
            row.append(r(_profile(spec, assignment)))
        M.append(row)
    return matrix_game_solve(M).lower


def _alternate(spec, i, r, opp, start, iters):
    """Cyclic best-punishment updates: each opponent in turn solves the
    matrix game against player ``i`` with the others held fixed."""
    current = {j: dict(start[j]) for j in opp}
    fr = {a: float(v) for a, v in r.values.items()}
    last = None
    for _ in range(iters):
        for j in opp:
            others = [k for k in opp if k != j]
            M = []
            for ai in spec.actions[i]:
                row = []
                for aj in spec.actions[j]:
                    total = 0.0
                    for combo in itertools.product(*(current[k].items() for k in others)):
                        p = 1.0
                        assignment = {i: ai, j: aj}
                        for k, (ak, pk) in zip(others, combo):
                            assignment[k] = ak
                            p *= float(pk)
                        total += p * fr[_profile(spec, assignment)]
                    row.append(total)
                M.append(row)
            sol = matrix_game_solve(M)
            current[j] = {a: p for a, p in zip(spec.actions[j], sol.col) if p > 0}
        val = sol.upper
        if last is not None and last - val <= 1e-12:
            break
        last = val
    return current


def _rationalize(dist, limit=10**6):
    fr = {a: Fraction(p).limit_denominator(limit) for a, p in dist.items()}
    fr = {a: p for a, p in fr.items() if p > 0}
    total = sum(fr.values())
    return {a: p / total for a, p in fr.items()}


def _multi_opponent_minmax(spec, i, r, opp, config: SolverConfig) -> MinmaxCertificate:
    candidates = []
    for combo in itertools.product(*(spec.actions[j] for j in opp)):
        candidates.append((MixedProfile.pure(dict(zip(opp, combo))), True))
    rng = random.Random(config.seed)
    starts = [{j: {a: 1.0 / len(spec.actions[j]) for a in spec.actions[j]} for j in opp}]
    for _ in range(config.multistart):
        start = {}
        for j in opp:
            w = [rng.random() for _ in spec.actions[j]]
            s = sum(w)
            start[j] = {a: x / s for a, x in zip(spec.actions[j], w)}
        starts.append(start)
    outputs = parallel_map(lambda s: _alternate(spec, i, r, opp, s, config.alternating_iters), starts)
    for out in outputs:
        candidates.append((MixedProfile({j: _rationalize(out[j]) for j in opp}), False))

    best = None
    for pun, pure in candidates:
        v, _ = best_response_value(spec, i, r, pun)
        if best is None or v < best[0]:
            best = (v, pun, pure)
    hi, pun, pure = best
    lo = correlated_lower_bound(spec, i, r)
    lo = min(lo, hi)
    method = "exhaustive_pure" if pure else "alternating"
    notes = ("independent-mixing minmax bracketed: lower bound from correlated punishments",)
    return MinmaxCertificate(lo, hi, pun, method, float(hi - lo), notes)
