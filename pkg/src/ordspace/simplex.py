"""Exact two-phase simplex over Fractions.

Small dense tableau solver for the margin programs in the line embedder.
Bland's rule both for the entering column and ratio ties, so the iteration
terminates; an iteration cap turns any remaining surprise into SolverError
rather than a wrong answer.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SolverError

OPTIMAL = "OPTIMAL"
INFEASIBLE = "INFEASIBLE"
UNBOUNDED = "UNBOUNDED"

_MAX_ITERS = 20000


def solve_lp(objective, constraints):
    """Maximize objective . x over x >= 0 subject to constraints.

    objective: list of Fractions, one per variable.
    constraints: list of (coeffs, sense, rhs) with sense in {"<=", ">=", "=="}.
    Returns (status, x, value); x and value are None unless OPTIMAL.
    """
    nvars = len(objective)
    rows = []
    for coeffs, sense, rhs in constraints:
        coeffs = [Fraction(v) for v in coeffs]
        rhs = Fraction(rhs)
        if len(coeffs) != nvars:
            raise ValueError("constraint width does not match objective")
        if rhs < 0:
            coeffs = [-v for v in coeffs]
            rhs = -rhs
            sense = {"<=": ">=", ">=": "<=", "==": "=="}[sense]
        rows.append((coeffs, sense, rhs))

    m = len(rows)
    ncols = nvars
    slack_of = {}
    for i, (_, sense, _) in enumerate(rows):
        if sense != "==":
            slack_of[i] = ncols
            ncols += 1
    art_of = {}
    for i, (_, sense, _) in enumerate(rows):
        if sense != "<=":
            art_of[i] = ncols
            ncols += 1

    T = [[Fraction(0)] * (ncols + 1) for _ in range(m)]
    basis = [0] * m
    for i, (coeffs, sense, rhs) in enumerate(rows):
        for j, v in enumerate(coeffs):
            T[i][j] = v
        if i in slack_of:
            T[i][slack_of[i]] = Fraction(1) if sense == "<=" else Fraction(-1)
        if i in art_of:
            T[i][art_of[i]] = Fraction(1)
            basis[i] = art_of[i]
        else:
            basis[i] = slack_of[i]
        T[i][ncols] = rhs

    artificial = set(art_of.values())

    if artificial:
        phase1 = [Fraction(0)] * ncols
        for j in artificial:
            phase1[j] = Fraction(-1)
        value = _run(T, basis, phase1, ncols, blocked=frozenset())
        if value is None or value < 0:
            return INFEASIBLE, None, None
        _drive_out_artificials(T, basis, ncols, artificial)

    cost = [Fraction(v) for v in objective] + [Fraction(0)] * (ncols - nvars)
    value = _run(T, basis, cost, ncols, blocked=frozenset(artificial))
    if value is None:
        return UNBOUNDED, None, None
    x = [Fraction(0)] * nvars
    for i, bi in enumerate(basis):
        if bi < nvars:
            x[bi] = T[i][ncols]
    return OPTIMAL, x, value


def _run(T, basis, cost, ncols, blocked):
    """Simplex iterations for one phase; returns the optimal value or None
    if unbounded."""
    m = len(T)
    obj = list(cost) + [Fraction(0)]
    for i in range(m):
        cb = cost[basis[i]]
        if cb:
            row = T[i]
            for j in range(ncols + 1):
                if row[j]:
                    obj[j] -= cb * row[j]

    for _ in range(_MAX_ITERS):
        entering = -1
        for j in range(ncols):
            if j not in blocked and obj[j] > 0:
                entering = j
                break
        if entering < 0:
            return -obj[ncols]
        leaving = -1
        best = None
        for i in range(m):
            tie = T[i][entering]
            if tie > 0:
                ratio = T[i][ncols] / tie
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leaving])
                ):
                    best = ratio
                    leaving = i
        if leaving < 0:
            return None
        _pivot(T, basis, obj, leaving, entering, ncols)
    raise SolverError("simplex iteration cap exceeded")


def _pivot(T, basis, obj, leaving, entering, ncols):
    row = T[leaving]
    piv = row[entering]
    for j in range(ncols + 1):
        row[j] /= piv
    for i in range(len(T)):
        if i == leaving:
            continue
        f = T[i][entering]
        if f:
            ri = T[i]
            for j in range(ncols + 1):
                if row[j]:
                    ri[j] -= f * row[j]
    f = obj[entering]
    if f:
        for j in range(ncols + 1):
            if row[j]:
                obj[j] -= f * row[j]
    basis[leaving] = entering


def _drive_out_artificials(T, basis, ncols, artificial):
    """Swap basic zero-level artificials for real columns; redundant rows
    (all-zero on real columns) are neutralized in place."""
    for i in range(len(T)):
        if basis[i] not in artificial:
            continue
        pivot_col = -1
        for j in range(ncols):
            if j not in artificial and T[i][j] != 0:
                pivot_col = j
                break
        if pivot_col < 0:
            # redundant constraint; clear the row so it can never pivot
            for j in range(ncols + 1):
                T[i][j] = Fraction(0)
            continue
        dummy = [Fraction(0)] * (ncols + 1)
        _pivot(T, basis, dummy, i, pivot_col, ncols)
    # artificial columns are blocked from entering afterwards
