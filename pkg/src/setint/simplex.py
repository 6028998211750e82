"""Dense two-phase simplex for the small LPs arising in hull-distance queries.

Solves  min c.x  s.t.  A_ub x <= b_ub,  A_eq x == b_eq,  x >= 0  with Bland's
anti-cycling rule, which guarantees termination at desk scale (dim <= 64,
generators <= 2000).
"""

from __future__ import annotations

import numpy as np

from .errors import SolverFailureError

_EPS = 1e-10


def solve_lp(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None, max_pivots=100_000):
    """Return (x, objective) for the LP above.

    Raises SolverFailureError on infeasibility, unboundedness, or pivot-limit
    exhaustion; the hull-distance LPs are always feasible and bounded, so any
    such failure indicates numerical trouble.
    """
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    rows = []
    rhs = []
    slack_rows = []
    if a_ub is not None:
        a_ub = np.asarray(a_ub, dtype=float)
        b_ub = np.asarray(b_ub, dtype=float)
        for i in range(a_ub.shape[0]):
            rows.append(a_ub[i])
            rhs.append(b_ub[i])
            slack_rows.append(len(rows) - 1)
    if a_eq is not None:
        a_eq = np.asarray(a_eq, dtype=float)
        b_eq = np.asarray(b_eq, dtype=float)
        for i in range(a_eq.shape[0]):
            rows.append(a_eq[i])
            rhs.append(b_eq[i])
    m = len(rows)
    n_slack = len(slack_rows)
    total = n + n_slack + m  # artificials for every row keep the logic uniform
    tab = np.zeros((m, total))
    b = np.array(rhs, dtype=float)
    for i, row in enumerate(rows):
        tab[i, :n] = row
    for j, i in enumerate(slack_rows):
        tab[i, n + j] = 1.0
    # Flip rows to make b nonnegative before adding the artificial basis.
    neg = b < 0
    tab[neg] *= -1.0
    b[neg] *= -1.0
    art0 = n + n_slack
    for i in range(m):
        tab[i, art0 + i] = 1.0
    basis = [art0 + i for i in range(m)]

    pivots = _phase(tab, b, basis, _phase1_costs(total, art0), max_pivots)
    if sum(b[i] for i in range(m) if basis[i] >= art0) > 1e-7:
        raise SolverFailureError("LP infeasible (phase 1 residual)")
    _drive_out_artificials(tab, b, basis, art0)

    full_c = np.zeros(total)
    full_c[:n] = c
    full_c[art0:] = np.inf  # never re-enter an artificial
    _phase(tab, b, basis, full_c, max_pivots - pivots, forbid_from=art0)

    x = np.zeros(total)
    for i, j in enumerate(basis):
        x[j] = b[i]
    return x[:n], float(c @ x[:n])


def _phase1_costs(total, art0):
    cost = np.zeros(total)
    cost[art0:] = 1.0
    return cost


def _reduced_costs(tab, basis, cost):
    cb = cost[basis]
    return cost - cb @ tab


def _phase(tab, b, basis, cost, max_pivots, forbid_from=None):
    m, total = tab.shape
    pivots = 0
    while True:
        red = _reduced_costs(tab, basis, np.where(np.isfinite(cost), cost, 0.0))
        limit = forbid_from if forbid_from is not None else total
        entering = -1
        for j in range(limit):  # Bland: smallest eligible index
            if j in basis:
                continue
            if red[j] < -_EPS:
                entering = j
                break
        if entering < 0:
            return pivots
        col = tab[:, entering]
        leaving = -1
        best = np.inf
        for i in range(m):
            if col[i] > _EPS:
                ratio = b[i] / col[i]
                if ratio < best - _EPS or (abs(ratio - best) <= _EPS and (leaving < 0 or basis[i] < basis[leaving])):
                    best = ratio
                    leaving = i
        if leaving < 0:
            raise SolverFailureError("LP unbounded")
        _pivot(tab, b, basis, leaving, entering)
        pivots += 1
        if pivots > max_pivots:
            raise SolverFailureError("simplex pivot limit exceeded")


def _pivot(tab, b, basis, row, col):
    piv = tab[row, col]
    tab[row] /= piv
    b[row] /= piv
    for i in range(tab.shape[0]):
        if i != row and tab[i, col] != 0.0:
            factor = tab[i, col]
            tab[i] -= factor * tab[row]
            b[i] -= factor * b[row]
            tab[i, col] = 0.0
    tab[row, col] = 1.0
    basis[row] = col


def _drive_out_artificials(tab, b, basis, art0):
    m = tab.shape[0]
    for i in range(m):
        if basis[i] >= art0 and b[i] <= _EPS:
            for j in range(art0):
                if abs(tab[i, j]) > _EPS:
                    _pivot(tab, b, basis, i, j)
                    break
