"""Small dense two-phase simplex method (Bland's rule).

Solves ``max c @ x`` subject to ``A_ub @ x <= b_ub``, ``A_eq @ x == b_eq``,
``x >= 0``.  Meant for tiny problems: positive-hull feasibility checks and
cross-checking the specialised knapsack relaxation.
"""

from dataclasses import dataclass

import numpy as np

_TOL = 1e-11


class LPError(RuntimeError):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


@dataclass
class LPResult:
    x: np.ndarray
    value: float


def _pivot(tab, basis, row, col):
    tab[row] /= tab[row, col]
    for r in range(tab.shape[0]):
        if r != row and tab[r, col] != 0.0:
            tab[r] -= tab[r, col] * tab[row]
    basis[row] = col


def _run(tab, basis, n_allowed, max_iter):
    # objective row is the last one and holds reduced costs of a minimisation
    m = tab.shape[0] - 1
    for _ in range(max_iter):
        obj = tab[-1, :n_allowed]
        entering = np.flatnonzero(obj < -_TOL)
        if entering.size == 0:
            return
        col = int(entering[0])
        column = tab[:m, col]
        positive = column > _TOL
        if not positive.any():
            raise Unbounded("objective is unbounded")
        ratios = np.full(m, np.inf)
        ratios[positive] = tab[:m, -1][positive] / column[positive]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + _TOL * max(1.0, abs(best)))
        row = min(ties, key=lambda r: basis[r])
        _pivot(tab, basis, int(row), col)
    raise LPError("iteration limit reached")


def linprog_max(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, max_iter=10_000):
    c = np.asarray(c, dtype=float)
    nvar = c.size
    A_ub = np.zeros((0, nvar)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, float)
    A_eq = np.zeros((0, nvar)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, float)

    n_ub, n_eq = A_ub.shape[0], A_eq.shape[0]
    m = n_ub + n_eq
    # rows: A x + slack = b, every row flipped so that b >= 0
    A = np.zeros((m, nvar + n_ub))
    A[:n_ub, :nvar] = A_ub
    A[:n_ub, nvar:] = np.eye(n_ub)
    A[n_ub:, :nvar] = A_eq
    b = np.concatenate([b_ub, b_eq])
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1
    ncol = nvar + n_ub

    tab = np.zeros((m + 1, ncol + m + 1))
    tab[:m, :ncol] = A
    tab[:m, ncol:ncol + m] = np.eye(m)
    tab[:m, -1] = b
    basis = list(range(ncol, ncol + m))
    tab[-1, :] = -tab[:m, :].sum(axis=0)
    tab[-1, ncol:ncol + m] = 0.0

    _run(tab, basis, ncol + m, max_iter)
    if tab[-1, -1] < -1e-9 * max(1.0, np.abs(b).max(initial=0.0)):
        raise Infeasible("no feasible point")

    # drive remaining artificials out of the basis
    for row in range(m):
        if basis[row] >= ncol:
            nonzero = np.flatnonzero(np.abs(tab[row, :ncol]) > _TOL)
            if nonzero.size:
                _pivot(tab, basis, row, int(nonzero[0]))

    tab = np.delete(tab, np.s_[ncol:ncol + m], axis=1)
    tab[-1, :] = 0.0
    tab[-1, :nvar] = -c
    for row, var in enumerate(basis):
        if var < ncol and tab[-1, var] != 0.0:
            tab[-1] -= tab[-1, var] * tab[row]
    _run(tab, basis, ncol, max_iter)

    x = np.zeros(ncol)
    for row, var in enumerate(basis):
        if var < ncol:
            x[var] = tab[row, -1]
    return LPResult(x=x[:nvar], value=float(c @ x[:nvar]))
