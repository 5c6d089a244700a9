"""Exact Gaussian elimination over ``Fraction``.

Matrices are numpy object arrays (or lists of rows) of ``Fraction``; nothing
here ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from ..errors import SingularError

ZERO = Fraction(0)
ONE = Fraction(1)


def identity_matrix(n: int) -> np.ndarray:
    return np.array([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], dtype=object)


def as_fraction_matrix(rows) -> np.ndarray:
    arr = np.array(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, value in np.ndenumerate(arr):
        out[idx] = Fraction(value)
    return out


def inverse_matrix(X: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse; raises ``SingularError`` when no pivot exists."""
    X = as_fraction_matrix(X)
    n = X.shape[0]
    if X.shape != (n, n):
        raise SingularError(f"cannot invert a {X.shape} matrix")
    Y = identity_matrix(n)

    for i in range(n):
        for j in range(i, n):
            if X[j, i] != 0:
                if j != i:
                    X[[i, j]] = X[[j, i]]
                    Y[[i, j]] = Y[[j, i]]
                break
        else:
            raise SingularError("matrix is not invertible")

        pivot = X[i, i]
        X[i, :] = X[i, :] / pivot
        Y[i, :] = Y[i, :] / pivot
        for j in range(n):
            if j != i and X[j, i] != 0:
                factor = X[j, i]
                X[j, :] = X[j, :] - factor * X[i, :]
                Y[j, :] = Y[j, :] - factor * Y[i, :]
    return Y


def row_echelon(rows: List[List[Fraction]], rhs: Optional[List[Fraction]] = None) -> List[int]:
    """In-place forward elimination; returns the free (pivot-less) columns."""
    free_vars: List[int] = []
    n_rows = len(rows)
    if n_rows == 0:
        return free_vars
    n_cols = len(rows[0])
    piv_r = 0
    for piv_c in range(n_cols):
        for i_row in range(piv_r, n_rows):
            if rows[i_row][piv_c] != 0:
                break
        else:
            free_vars.append(piv_c)
            continue
        if i_row != piv_r:
            rows[piv_r], rows[i_row] = rows[i_row], rows[piv_r]
            if rhs is not None:
                rhs[piv_r], rhs[i_row] = rhs[i_row], rhs[piv_r]
        fp = rows[piv_r][piv_c]
        for r in range(piv_r + 1, n_rows):
            fr = rows[r][piv_c]
            if fr == 0:
                continue
            frp = fr / fp
            for c in range(piv_c, n_cols):
                rows[r][c] -= rows[piv_r][c] * frp
            if rhs is not None:
                rhs[r] -= rhs[piv_r] * frp
        piv_r += 1
        if piv_r == n_rows:
            free_vars.extend(range(piv_c + 1, n_cols))
            break
    return free_vars


@dataclass(frozen=True)
class LinearSolve:
    unknowns: int
    equations: int
    rank: int
    consistent: bool
    solution: Optional[List[Fraction]]

    @property
    def unique(self) -> bool:
        return self.consistent and self.rank == self.unknowns


def solve_exact(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], unknowns: int) -> LinearSolve:
    """Solve ``rows · x = rhs``; free variables, if any, are set to zero."""
    m = [[Fraction(v) for v in row] for row in rows]
    t = [Fraction(v) for v in rhs]
    if not m:
        return LinearSolve(unknowns, 0, 0, True, [ZERO] * unknowns)
    free_vars = row_echelon(m, t)
    rank = unknowns - len(free_vars)
    for r in range(rank, len(m)):
        if t[r] != 0:
            return LinearSolve(unknowns, len(m), rank, False, None)

    free = set(free_vars)
    piv_cols = [c for c in range(unknowns) if c not in free]
    sol = [ZERO] * unknowns
    for r in range(len(piv_cols) - 1, -1, -1):
        piv_c = piv_cols[r]
        s = -t[r]
        for c in range(piv_c + 1, unknowns):
            s += m[r][c] * sol[c]
        sol[piv_c] = -s / m[r][piv_c]
    return LinearSolve(unknowns, len(m), rank, True, sol)


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    m = [[Fraction(v) for v in row] for row in rows]
    if not m:
        return 0
    return len(m[0]) - len(row_echelon(m))


__all__ = [
    "identity_matrix",
    "as_fraction_matrix",
    "inverse_matrix",
    "row_echelon",
    "LinearSolve",
    "solve_exact",
    "matrix_rank",
]
