"""Exact integer and rational linear algebra.

Matrices are numpy arrays with ``dtype=object`` holding Python ints, so all
arithmetic is arbitrary precision and nothing ever touches floating point.
``fractions.Fraction`` is used only inside the congruence diagonalization.
"""
import logging
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.errors import DimensionError, ShapeError

logger = logging.getLogger(__name__)

# An integer matrix: 2-D numpy array, dtype=object, Python int entries.
IntMatrix = np.ndarray


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def as_int_matrix(data, cols: int = 0) -> IntMatrix:
    """Convert nested sequences, numpy arrays or a GramMatrix to an IntMatrix.

    ``cols`` gives the width of an empty matrix. Entries must be integers;
    floats and fractions are rejected rather than truncated.
    """
    if isinstance(data, GramMatrix):
        return data.entries
    if isinstance(data, np.ndarray):
        if data.ndim != 2:
            raise ShapeError(f"expected a 2-D matrix, got {data.ndim} dimensions")
        cols = data.shape[1]
        rows = data.tolist()
    else:
        rows = [list(row) for row in data]
    width = len(rows[0]) if rows else cols
    if any(len(row) != width for row in rows):
        raise ShapeError("ragged matrix: rows have different lengths")
    out = np.zeros((len(rows), width), dtype=object)
    try:
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                out[i, j] = operator.index(x)
    except TypeError as e:
        raise ShapeError(f"matrix entries must be integers: {e}") from e
    return out


def as_int_vector(data) -> np.ndarray:
    """Convert a sequence of integers to a 1-D object array."""
    values = list(data.tolist() if isinstance(data, np.ndarray) else data)
    out = np.zeros(len(values), dtype=object)
    try:
        for i, x in enumerate(values):
            out[i] = operator.index(x)
    except TypeError as e:
        raise ShapeError(f"vector entries must be integers: {e}") from e
    return out


def identity(n: int) -> IntMatrix:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def _square(m) -> IntMatrix:
    a = as_int_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got {a.shape[0]}x{a.shape[1]}")
    return a


def _symmetric(g) -> IntMatrix:
    a = as_int_matrix(g)
    if a.shape[0] != a.shape[1] or not (a == a.T).all():
        raise ShapeError("expected a symmetric matrix")
    return a


def det_exact(m) -> int:
    """Determinant by Bareiss fraction-free elimination.

    Every intermediate value is itself a minor of the input, so the divisions
    are exact and the entries stay bounded by Hadamard's inequality.
    """
    rows = _square(m).tolist()
    n = len(rows)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (pivot * rows[i][j] - rows[i][k] * rows[k][j]) // prev
        prev = pivot
    return sign * rows[n - 1][n - 1]


@dataclass(frozen=True, eq=False)
class SnfResult:
    """Smith normal form ``u @ a @ v == d`` with ``u``, ``v`` unimodular."""

    d: IntMatrix
    u: IntMatrix
    v: IntMatrix

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(int(self.d[i, i]) for i in range(min(self.d.shape)))

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        """The nonzero diagonal entries, a divisibility chain of positive ints."""
        return tuple(x for x in self.diagonal if x != 0)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(m) -> SnfResult:
    """Smith normal form by elementary row and column operations.

    The pivot is always the entry of least absolute value in the trailing
    block, and a pivot that fails to divide the rest of the block is
    repaired by adding the offending row into the pivot row.
    """
    a = as_int_matrix(m)
    n_rows, n_cols = a.shape
    d = a.tolist()
    u = identity(n_rows).tolist()
    v = identity(n_cols).tolist()

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            d[i], d[j] = d[j], d[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in d:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def sub_row(src: int, dst: int, q: int) -> None:
        # row[dst] -= q * row[src]
        d[dst] = [x - q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def sub_col(src: int, dst: int, q: int) -> None:
        # col[dst] -= q * col[src]
        for row in d:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    for t in range(min(n_rows, n_cols)):
        pivot = None
        for i in range(t, n_rows):
            for j in range(t, n_cols):
                if d[i][j] != 0 and (pivot is None or abs(d[i][j]) < abs(d[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            p = d[t][t]
            for i in range(t + 1, n_rows):
                if d[i][t] != 0:
                    sub_row(t, i, d[i][t] // p)
            for j in range(t + 1, n_cols):
                if d[t][j] != 0:
                    sub_col(t, j, d[t][j] // p)

            # Remainders left in row t or column t are smaller than the pivot.
            col_rest = [i for i in range(t + 1, n_rows) if d[i][t] != 0]
            row_rest = [j for j in range(t + 1, n_cols) if d[t][j] != 0]
            if col_rest or row_rest:
                best_i = min(col_rest, key=lambda i: abs(d[i][t]), default=None)
                best_j = min(row_rest, key=lambda j: abs(d[t][j]), default=None)
                if best_j is None or (best_i is not None and abs(d[best_i][t]) <= abs(d[t][best_j])):
                    swap_rows(t, best_i)
                else:
                    swap_cols(t, best_j)
                continue

            bad = next(
                (i for i in range(t + 1, n_rows) for j in range(t + 1, n_cols) if d[i][j] % p != 0),
                None,
            )
            if bad is None:
                break
            sub_row(bad, t, -1)

        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]

    return SnfResult(
        d=_freeze(as_int_matrix(d, n_cols)),
        u=_freeze(as_int_matrix(u, n_rows)),
        v=_freeze(as_int_matrix(v, n_cols)),
    )


def rank(m) -> int:
    return smith_normal_form(m).rank


def integer_kernel(m) -> IntMatrix:
    """Basis of the integer kernel ``{x : m @ x == 0}``, one vector per row.

    The basis is read off the trailing columns of the right transform of the
    Smith normal form, so it spans the full kernel lattice (it is saturated).
    """
    a = as_int_matrix(m)
    snf = smith_normal_form(a)
    r = snf.rank
    kernel = snf.v[:, r:].T
    return _freeze(as_int_matrix(kernel, a.shape[1]))


def solve_integer(a, b: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """One integer solution of ``a @ x == b``, or None when no integer solution exists."""
    a = as_int_matrix(a)
    b = as_int_vector(b)
    if len(b) != a.shape[0]:
        raise DimensionError(f"right-hand side has length {len(b)}, expected {a.shape[0]}")
    snf = smith_normal_form(a)
    c = (snf.u @ b).tolist() if a.shape[0] else []
    diag = snf.diagonal
    y = [0] * a.shape[1]
    for i, ci in enumerate(c):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if ci != 0:
                return None
        elif ci % di != 0:
            return None
        else:
            y[i] = ci // di
    x = snf.v @ as_int_vector(y) if a.shape[1] else np.zeros(0, dtype=object)
    return tuple(int(xi) for xi in x)


def signature(g) -> Tuple[int, int, int]:
    """(positives, negatives, zeros) of a symmetric matrix.

    Exact congruence diagonalization over the rationals. A trailing block
    with zero diagonal but a nonzero off-diagonal entry (a hyperbolic plane)
    is split by adding row/column j into i, which makes the diagonal entry
    ``2 * g[i][j]`` nonzero.
    """
    q: List[List[Fraction]] = [[Fraction(x) for x in row] for row in _symmetric(g).tolist()]
    n = len(q)
    positives = negatives = 0

    def swap(i: int, j: int) -> None:
        if i != j:
            q[i], q[j] = q[j], q[i]
            for row in q:
                row[i], row[j] = row[j], row[i]

    for k in range(n):
        pivot = next((i for i in range(k, n) if q[i][i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if q[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            q[i] = [x + y for x, y in zip(q[i], q[j])]
            for row in q:
                row[i] += row[j]
            pivot = i
        swap(k, pivot)

        p = q[k][k]
        if p > 0:
            positives += 1
        else:
            negatives += 1
        for i in range(k + 1, n):
            if q[i][k] == 0:
                continue
            f = q[i][k] / p
            for j in range(k + 1, n):
                q[i][j] -= f * q[k][j]
        for i in range(k + 1, n):
            q[i][k] = q[k][i] = Fraction(0)

    return positives, negatives, n - positives - negatives


def is_positive_definite(g) -> bool:
    """Sylvester's criterion: every leading principal minor is positive."""
    a = _symmetric(g)
    return all(det_exact(a[:k, :k]) > 0 for k in range(1, a.shape[0] + 1))


class GramMatrix:
    """A symmetric integer matrix read as a bilinear form."""

    def __init__(self, entries):
        a = _symmetric(entries)
        self._entries = _freeze(a.copy())

    @property
    def entries(self) -> IntMatrix:
        return self._entries

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @cached_property
    def det(self) -> int:
        return det_exact(self._entries)

    @cached_property
    def rank(self) -> int:
        return rank(self._entries)

    @cached_property
    def signature(self) -> Tuple[int, int, int]:
        return signature(self._entries)

    @cached_property
    def positive_definite(self) -> bool:
        return is_positive_definite(self._entries)

    def bilinear(self, x, y) -> int:
        return int(as_int_vector(x) @ self._entries @ as_int_vector(y))

    def norm(self, x) -> int:
        return self.bilinear(x, x)

    def diagonal(self) -> Tuple[int, ...]:
        return tuple(int(self._entries[i, i]) for i in range(self.dim))

    def tolist(self) -> List[List[int]]:
        return self._entries.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, GramMatrix):
            return NotImplemented
        return self.tolist() == other.tolist()

    def __hash__(self) -> int:
        return hash(tuple(map(tuple, self.tolist())))

    def __repr__(self) -> str:
        return f"GramMatrix({self.tolist()})"
