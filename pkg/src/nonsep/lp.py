"""Dense two-phase simplex for the small linear programs used everywhere.

Every decision procedure in this package (containment of a translate,
exact covering ratios, asymmetry, disjointness of hulls) bottoms out in a
linear program with at most a few hundred rows and a few dozen variables.
At that scale a self-contained dense tableau solver is preferable to an
external dependency: runs are reproducible, statuses are exactly the three
we need, and feasible points double as witnesses.

Conventions: variables are free, rows are ``row @ x <= rhs`` or
``row @ x == rhs``, and `solve_lp` maximizes unless told otherwise.
Statuses are ``"optimal"``, ``"infeasible"``, ``"unbounded"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

# Pivot elements below this are treated as zero regardless of the caller's
# feasibility tolerance; ratio tests on smaller entries are unstable.
_PIVOT_EPS = 1e-11
_MAX_ITER = 20000
_BLAND_AFTER = 2000

LEQ = "<="
EQ = "="


@dataclass(frozen=True)
class LinearProgram:
    """Objective vector, rows of (coefficients, relation, rhs), and arity."""

    objective: np.ndarray
    constraints: list = field(default_factory=list)
    nvars: int = 0
    maximize: bool = True


@dataclass(frozen=True)
class LpResult:
    status: str
    value: float | None
    x: np.ndarray | None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def solve_lp(lp: LinearProgram, tol: float = 1e-8) -> LpResult:
    """Solve a `LinearProgram`; see module docstring for conventions."""
    c = np.asarray(lp.objective, dtype=float)
    n = lp.nvars if lp.nvars else c.size
    if c.size != n:
        raise InputError("objective length does not match nvars")
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for row, rel, rhs in lp.constraints:
        row = np.asarray(row, dtype=float)
        if row.size != n:
            raise InputError("constraint row length does not match nvars")
        if rel in (LEQ, "<"):
            a_ub.append(row)
            b_ub.append(float(rhs))
        elif rel in (EQ, "=="):
            a_eq.append(row)
            b_eq.append(float(rhs))
        elif rel in (">=", ">"):
            a_ub.append(-row)
            b_ub.append(-float(rhs))
        else:
            raise InputError(f"unknown relation {rel!r}")
    return solve(
        c,
        np.array(a_ub) if a_ub else None,
        np.array(b_ub) if b_ub else None,
        np.array(a_eq) if a_eq else None,
        np.array(b_eq) if b_eq else None,
        maximize=lp.maximize,
        tol=tol,
    )


def solve(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None, *, maximize=True,
          tol: float = 1e-8) -> LpResult:
    """Matrix-form entry point. Arrays may be None when a block is absent."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    n = c.size
    a_ub = np.zeros((0, n)) if a_ub is None else np.atleast_2d(np.asarray(a_ub, float))
    b_ub = np.zeros(0) if b_ub is None else np.atleast_1d(np.asarray(b_ub, float))
    a_eq = np.zeros((0, n)) if a_eq is None else np.atleast_2d(np.asarray(a_eq, float))
    b_eq = np.zeros(0) if b_eq is None else np.atleast_1d(np.asarray(b_eq, float))
    if a_ub.shape != (b_ub.size, n) or a_eq.shape != (b_eq.size, n):
        raise InputError("constraint block shapes are inconsistent")

    c_min = -c if maximize else c
    status, x = _solve_min(c_min, a_ub, b_ub, a_eq, b_eq, tol)
    if status != "optimal":
        return LpResult(status, None, None)
    return LpResult("optimal", float(c @ x), x)


def feasible_point(a_ub=None, b_ub=None, a_eq=None, b_eq=None,
                   tol: float = 1e-8) -> np.ndarray | None:
    """Phase-1 only: a point satisfying the rows, or None if there is none."""
    ncols = None
    for block in (a_ub, a_eq):
        if block is not None:
            ncols = np.atleast_2d(np.asarray(block)).shape[1]
            break
    if ncols is None:
        raise InputError("no constraints given")
    res = solve(np.zeros(ncols), a_ub, b_ub, a_eq, b_eq, tol=tol)
    return res.x if res.optimal else None


def _solve_min(c, a_ub, b_ub, a_eq, b_eq, tol):
    """min c@x, free x. Splits variables, adds slacks, runs two phases."""
    n = c.size
    m_ub, m_eq = b_ub.size, b_eq.size
    m = m_ub + m_eq

    if m == 0:
        # Unconstrained: optimal only for a zero objective.
        if np.abs(c).max(initial=0.0) <= tol:
            return "optimal", np.zeros(n)
        return "unbounded", None

    # Row equilibration keeps the ratio tests honest across scales.
    rows = np.vstack([a_ub, a_eq])
    rhs = np.concatenate([b_ub, b_eq])
    scale = np.abs(rows).max(axis=1)
    scale[scale < 1e-30] = 1.0
    rows = rows / scale[:, None]
    rhs = rhs / scale

    # x = xp - xm, slack per inequality row.
    ncols = 2 * n + m_ub
    big = np.zeros((m, ncols))
    big[:, :n] = rows
    big[:, n:2 * n] = -rows
    big[:m_ub, 2 * n:] = np.eye(m_ub)
    neg = rhs < 0
    big[neg] *= -1.0
    rhs = np.abs(rhs)

    cost = np.zeros(ncols)
    cost[:n] = c
    cost[n:2 * n] = -c

    status, y = _two_phase(big, rhs, cost, tol)
    if status != "optimal":
        return status, None
    return "optimal", y[:n] - y[n:2 * n]


def _two_phase(A, b, c, tol):
    m, n = A.shape
    T = np.empty((m, n + m + 1))
    T[:, :n] = A
    T[:, n:n + m] = np.eye(m)
    T[:, -1] = b
    basis = list(range(n, n + m))

    # Phase 1: reduced costs for min(sum of artificials).
    z = np.zeros(n + m + 1)
    z[n:n + m] = 1.0
    for r in range(m):
        z -= T[r]
    _iterate(T, z, basis, n + m, tol)
    if -z[-1] > tol * max(1.0, float(np.abs(b).max(initial=0.0))):
        return "infeasible", None

    # Drive leftover artificials out of the basis; drop redundant rows.
    keep = []
    for r in range(m):
        if basis[r] >= n:
            j = int(np.argmax(np.abs(T[r, :n])))
            if abs(T[r, j]) > _PIVOT_EPS:
                _pivot(T, z, basis, r, j)
            else:
                continue
        keep.append(r)
    if len(keep) < m:
        T = T[keep]
        basis = [basis[r] for r in keep]
        m = len(keep)

    T = np.hstack([T[:, :n], T[:, -1:]])

    # Phase 2 with the true costs.
    z2 = np.concatenate([c, [0.0]])
    for r in range(m):
        coeff = z2[basis[r]]
        if coeff != 0.0:
            z2 -= coeff * T[r]
    status = _iterate(T, z2, basis, n, tol)
    if status == "unbounded":
        return "unbounded", None

    x = np.zeros(n)
    for r, j in enumerate(basis):
        x[j] = T[r, -1]
    return "optimal", x


def _iterate(T, z, basis, ncols, tol):
    for it in range(_MAX_ITER):
        if it < _BLAND_AFTER:
            j = int(np.argmin(z[:ncols]))
            if z[j] >= -tol:
                return "optimal"
        else:
            # Bland's rule: slower, cycle-free.
            negs = np.nonzero(z[:ncols] < -tol)[0]
            if negs.size == 0:
                return "optimal"
            j = int(negs[0])
        col = T[:, j]
        pivotable = col > _PIVOT_EPS
        if not pivotable.any():
            return "unbounded"
        ratios = np.full(col.size, np.inf)
        ratios[pivotable] = T[pivotable, -1] / col[pivotable]
        r = int(np.argmin(ratios))
        best = ratios[r]
        ties = np.nonzero(ratios <= best + 1e-12)[0]
        if ties.size > 1:
            r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, z, basis, r, j)
    raise RuntimeError("simplex iteration limit reached")


def _pivot(T, z, basis, r, j):
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    z -= z[j] * T[r]
    basis[r] = j
