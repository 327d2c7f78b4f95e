"""Linear (in)equalities over frequency vectors.

A threshold-table objective is piecewise constant in the limiting frequency
vector: which rule fires is decided by finitely many linear comparisons.
Deciding whether a rule can fire therefore reduces to LP feasibility with a
mix of strict and non-strict inequalities, handled by maximising a common
slack on the strict ones.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .lp import linprog
from .model import FrequencyCondition, ThresholdTable

Form = dict  # variable -> coefficient


@dataclass(frozen=True)
class Ineq:
    """``sum(coeffs[v] * x[v]) + const`` is ``> 0`` (strict) or ``>= 0``."""

    coeffs: Mapping
    const: Fraction
    strict: bool
    label: str = ""

    def value(self, point: Mapping) -> Fraction:
        return sum((c * point.get(v, 0) for v, c in self.coeffs.items()), Fraction(0)) + self.const

    def holds(self, point: Mapping) -> bool:
        v = self.value(point)
        return v > 0 if self.strict else v >= 0


def _scaled(form: Form, k=1) -> dict:
    return {v: k * c for v, c in form.items()}


def condition_ineq(cond: FrequencyCondition, form: Form, negate: bool = False, label: str = "") -> Ineq:
    """Inequality saying the frequency ``form`` satisfies (or violates) ``cond``."""
    thr = Fraction(1) if cond.relation == "equals_one" else cond.threshold
    strict_when_true = cond.relation == "greater"
    if not negate:
        return Ineq(_scaled(form), -thr, strict_when_true, label)
    return Ineq(_scaled(form, -1), thr, not strict_when_true, label)


def pattern_ineqs(table: ThresholdTable, k: int, form_of: Callable, label: str = "") -> list:
    """Constraints making pattern ``k`` fire: rule ``k`` holds and every
    earlier rule fails.  ``k == len(table.rules)`` is the default."""
    out = []
    for j, (cond, _) in enumerate(table.rules[:k]):
        out.append(condition_ineq(cond, form_of(cond.profile_set), negate=True, label=f"{label}not rule {j}"))
    if k < len(table.rules):
        cond = table.rules[k][0]
        out.append(condition_ineq(cond, form_of(cond.profile_set), label=f"{label}rule {k}"))
    return out


def solve(variables, eqs, ineqs, *, objective: Mapping | None = None, interior: bool = False):
    """Find ``x >= 0`` with ``eqs`` and ``ineqs`` satisfied.

    ``eqs`` is a list of ``(form, rhs)``.  Returns ``(point, slack)`` or
    ``None``.  With strict inequalities present the common slack on them is
    maximised (capped at 1) and must come out positive.  Without strict
    inequalities the slack is spread over all inequalities so the point sits
    away from the boundary, or, if ``objective`` is given, that form is
    maximised instead.  ``interior=True`` puts the slack on every
    inequality and demands it be positive.
    """
    variables = list(variables)
    idx = {v: k for k, v in enumerate(variables)}
    nv = len(variables)
    any_strict = interior or any(q.strict for q in ineqs)
    if interior:
        ineqs = [Ineq(q.coeffs, q.const, True, q.label) for q in ineqs]
    use_slack = objective is None or any_strict
    T = nv  # slack column
    ncols = nv + 1
    A_ub, b_ub = [], []
    for q in ineqs:
        row = [Fraction(0)] * ncols
        for v, c in q.coeffs.items():
            row[idx[v]] -= c
        if use_slack and (q.strict or not any_strict):
            row[T] = Fraction(1)
        A_ub.append(row)
        b_ub.append(q.const)
    row = [Fraction(0)] * ncols
    row[T] = Fraction(1)
    A_ub.append(row)
    b_ub.append(Fraction(1))
    A_eq, b_eq = [], []
    for form, rhs in eqs:
        row = [Fraction(0)] * ncols
        for v, c in form.items():
            row[idx[v]] += c
        A_eq.append(row)
        b_eq.append(rhs)
    c = [Fraction(0)] * ncols
    if use_slack:
        c[T] = Fraction(1)
    else:
        for v, coef in objective.items():
            c[idx[v]] += coef
    res = linprog(c, A_ub, b_ub, A_eq, b_eq)
    if not res.optimal:
        return None
    slack = res.x[T] if use_slack else Fraction(0)
    if any_strict and slack <= 0:
        return None
    point = {v: res.x[idx[v]] for v in variables}
    return point, slack
