"""Dense two-phase tableau simplex with Bland's anti-cycling rule.

Works over exact rationals when every coefficient is an ``int`` or
``Fraction`` and over floats otherwise.  Problems are

    maximize    c . x
    subject to  A_ub x <= b_ub,  A_eq x == b_eq,  x >= 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SolverError

FLOAT_EPS = 1e-11
MAX_PIVOTS = 200_000


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list | None = None
    value: object = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _is_exact(*blocks) -> bool:
    for block in blocks:
        for row in block:
            for v in row if isinstance(row, (list, tuple)) else (row,):
                if not isinstance(v, (int, Fraction)) or isinstance(v, bool):
                    return False
    return True


class _Tableau:
    def __init__(self, rows, rhs, exact):
        self.exact = exact
        self.rows = rows  # list of lists, each row has len(ncols)
        self.rhs = rhs
        self.basis = []

    def zero(self, v) -> bool:
        return v == 0 if self.exact else abs(v) <= FLOAT_EPS

    def pos(self, v) -> bool:
        return v > 0 if self.exact else v > FLOAT_EPS

    def pivot(self, r, c, objectives):
        row = self.rows[r]
        piv = row[c]
        inv = 1 / piv if not self.exact else Fraction(1) / piv
        self.rows[r] = row = [v * inv for v in row]
        self.rhs[r] = self.rhs[r] * inv
        for k in range(len(self.rows)):
            if k != r:
                f = self.rows[k][c]
                if not self.zero(f):
                    rk = self.rows[k]
                    self.rows[k] = [a - f * b for a, b in zip(rk, row)]
                    self.rhs[k] = self.rhs[k] - f * self.rhs[r]
                elif f != 0:
                    self.rows[k][c] = 0 * f
        for obj in objectives:
            cost, val = obj
            f = cost[c]
            if f != 0:
                for j, b in enumerate(row):
                    cost[j] = cost[j] - f * b
                val[0] = val[0] - f * self.rhs[r]
        self.basis[r] = c

    def run(self, cost, val, allowed, extra_objectives=()):
        """Maximise; ``cost`` holds reduced costs (positive = improving)."""
        for _ in range(MAX_PIVOTS):
            enter = None
            for j in allowed:
                if self.pos(cost[j]):
                    enter = j
                    break
            if enter is None:
                return "optimal"
            best = None
            for r, row in enumerate(self.rows):
                a = row[enter]
                if self.pos(a):
                    ratio = self.rhs[r] / a
                    key = (ratio, self.basis[r])
                    if best is None or key[0] < best[0][0] or (
                        (key[0] == best[0][0] if self.exact else abs(key[0] - best[0][0]) <= FLOAT_EPS)
                        and key[1] < best[0][1]
                    ):
                        best = (key, r)
            if best is None:
                return "unbounded"
            self.pivot(best[1], enter, [(cost, val)] + list(extra_objectives))
        raise SolverError("simplex pivot limit exceeded")


def linprog(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), *, exact: bool | None = None) -> LPResult:
    """Maximize ``c . x`` over the polyhedron; see module docstring."""
    c = list(c)
    A_ub = [list(r) for r in A_ub]
    A_eq = [list(r) for r in A_eq]
    b_ub = list(b_ub)
    b_eq = list(b_eq)
    if exact is None:
        exact = _is_exact(c, A_ub, b_ub, A_eq, b_eq)
    conv = Fraction if exact else float
    c = [conv(v) for v in c]
    A_ub = [[conv(v) for v in r] for r in A_ub]
    A_eq = [[conv(v) for v in r] for r in A_eq]
    b_ub = [conv(v) for v in b_ub]
    b_eq = [conv(v) for v in b_eq]
    nvar = len(c)
    m_ub, m_eq = len(A_ub), len(A_eq)
    nslack = m_ub
    # columns: x (nvar) | slacks (m_ub) | artificials (added below)
    rows, rhs, needs_art = [], [], []
    for k in range(m_ub):
        row = A_ub[k] + [conv(0)] * nslack
        row[nvar + k] = conv(1)
        b = b_ub[k]
        if b < 0:
            row = [-v for v in row]
            b = -b
            needs_art.append(True)
        else:
            needs_art.append(False)
        rows.append(row)
        rhs.append(b)
    for k in range(m_eq):
        row = A_eq[k] + [conv(0)] * nslack
        b = b_eq[k]
        if b < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row)
        rhs.append(b)
        needs_art.append(True)
    nart = sum(needs_art)
    ncols = nvar + nslack + nart
    basis = []
    art_col = nvar + nslack
    art_cols = []
    for r, row in enumerate(rows):
        row.extend([conv(0)] * nart)
        if needs_art[r]:
            row[art_col] = conv(1)
            basis.append(art_col)
            art_cols.append(art_col)
            art_col += 1
        else:
            basis.append(nvar + r)
    tab = _Tableau(rows, rhs, exact)
    tab.basis = basis

    # phase-2 reduced costs, kept in sync during phase 1
    cost2 = c + [conv(0)] * (nslack + nart)
    val2 = [conv(0)]
    if nart:
        cost1 = [conv(0)] * ncols
        val1 = [conv(0)]
        for r, b in enumerate(basis):
            if b >= nvar + nslack:
                cost1 = [a + v for a, v in zip(cost1, rows[r])]
                val1[0] += rhs[r]
        for col in art_cols:
            cost1[col] = conv(0)
        status = tab.run(cost1, val1, range(nvar + nslack), [(cost2, val2)])
        if not tab.zero(val1[0]) and val1[0] > 0:
            return LPResult("infeasible")
        # drive remaining artificials out of the basis
        r = 0
        while r < len(tab.rows):
            if tab.basis[r] >= nvar + nslack:
                col = next((j for j in range(nvar + nslack) if not tab.zero(tab.rows[r][j])), None)
                if col is None:
                    del tab.rows[r]
                    del tab.rhs[r]
                    del tab.basis[r]
                    continue
                tab.pivot(r, col, [(cost2, val2)])
            r += 1
    # reduced costs for phase 2 must be expressed relative to the basis
    cost = [conv(v) for v in c] + [conv(0)] * (nslack + nart)
    val = [conv(0)]
    for r, b in enumerate(tab.basis):
        cb = cost[b]
        if cb != 0:
            cost = [a - cb * v for a, v in zip(cost, tab.rows[r])]
            val[0] = val[0] + cb * tab.rhs[r]
    # after the subtraction, cost[j] = c_j - c_B B^-1 A_j (positive improves)
    status = tab.run(cost, val, range(nvar + nslack))
    if status == "unbounded":
        return LPResult("unbounded")
    x = [conv(0)] * nvar
    for r, b in enumerate(tab.basis):
        if b < nvar:
            x[b] = tab.rhs[r]
    value = sum((ci * xi for ci, xi in zip(c, x)), conv(0))
    return LPResult("optimal", x, value)


def solve_exact(A, b):
    """Solve the square system ``A x = b`` over the rationals by Gauss-Jordan
    elimination; ``None`` when ``A`` is singular."""
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def null_vector(A):
    """A nonzero rational ``x`` with ``A x = 0`` if the columns of ``A`` are
    dependent, else ``None``."""
    if not A:
        return None
    rows, cols = len(A), len(A[0])
    M = [[Fraction(v) for v in row] for row in A]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((k for k in range(r, rows) if M[k][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [v / p for v in M[r]]
        for k in range(rows):
            if k != r and M[k][c] != 0:
                f = M[k][c]
                M[k] = [a - f * b for a, b in zip(M[k], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    x = [Fraction(0)] * cols
    x[f] = Fraction(1)
    for k, c in enumerate(pivots):
        x[c] = -M[k][f]
    return x
