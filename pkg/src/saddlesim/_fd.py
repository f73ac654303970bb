"""Finite-difference stencil matrices on non-uniform 1-D node sets.

Interior rows use the three-point formulas for unequal spacing (exact on
quadratics).  End rows of the first-derivative matrix are one-sided
three-point, also exact on quadratics; with only two nodes they fall back
to the two-point slope.  End rows of the second-derivative matrix are left
empty: every equation assembled at a boundary node is a boundary-condition
row, so those entries are never read.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def first_derivative_matrix(x: np.ndarray) -> sp.csr_matrix:
    """d/dx as an (n, n) sparse matrix on nodes `x` (strictly increasing)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError("need at least two nodes for a derivative matrix")
    rows, cols, vals = [], [], []
    if n == 2:
        h = x[1] - x[0]
        rows += [0, 0, 1, 1]
        cols += [0, 1, 0, 1]
        vals += [-1.0 / h, 1.0 / h, -1.0 / h, 1.0 / h]
        return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))

    # interior: nodes i-1, i, i+1 with gaps a, b
    a = x[1:-1] - x[:-2]
    b = x[2:] - x[1:-1]
    i = np.arange(1, n - 1)
    rows += list(i) * 3
    cols += list(i - 1) + list(i) + list(i + 1)
    vals += list(-b / (a * (a + b))) + list((b - a) / (a * b)) + list(a / (b * (a + b)))

    # one-sided second-order rows at both ends
    a0, b0 = x[1] - x[0], x[2] - x[1]
    rows += [0, 0, 0]
    cols += [0, 1, 2]
    vals += [-(2 * a0 + b0) / (a0 * (a0 + b0)), (a0 + b0) / (a0 * b0), -a0 / (b0 * (a0 + b0))]
    a1, b1 = x[-1] - x[-2], x[-2] - x[-3]
    rows += [n - 1, n - 1, n - 1]
    cols += [n - 1, n - 2, n - 3]
    vals += [(2 * a1 + b1) / (a1 * (a1 + b1)), -(a1 + b1) / (a1 * b1), a1 / (b1 * (a1 + b1))]

    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def second_derivative_matrix(x: np.ndarray) -> sp.csr_matrix:
    """d^2/dx^2 on interior nodes; boundary rows are intentionally zero."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 3:
        return sp.csr_matrix((n, n))
    a = x[1:-1] - x[:-2]
    b = x[2:] - x[1:-1]
    i = np.arange(1, n - 1)
    rows = list(i) * 3
    cols = list(i - 1) + list(i) + list(i + 1)
    vals = list(2 / (a * (a + b))) + list(-2 / (a * b)) + list(2 / (b * (a + b)))
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
