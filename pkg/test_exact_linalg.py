import random

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from src.errors import DimensionError, ShapeError
from src.exact_linalg import (
    GramMatrix,
    as_int_matrix,
    det_exact,
    identity,
    integer_kernel,
    is_positive_definite,
    rank,
    signature,
    smith_normal_form,
    solve_integer,
)

N_RANDOM = 500


def cofactor_det(rows):
    if not rows:
        return 1
    if len(rows) == 1:
        return rows[0][0]
    return sum(
        (-1) ** j * rows[0][j] * cofactor_det([row[:j] + row[j + 1:] for row in rows[1:]])
        for j in range(len(rows))
    )


def random_matrix(rng, n_rows, n_cols, bound=9):
    return [[rng.randint(-bound, bound) for _ in range(n_cols)] for _ in range(n_rows)]


@st.composite
def int_matrices(draw, max_dim=6, bound=20):
    n_rows = draw(st.integers(1, max_dim))
    n_cols = draw(st.integers(1, max_dim))
    row = st.lists(st.integers(-bound, bound), min_size=n_cols, max_size=n_cols)
    return draw(st.lists(row, min_size=n_rows, max_size=n_rows))


@st.composite
def symmetric_matrices(draw, max_dim=5, bound=6):
    n = draw(st.integers(1, max_dim))
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            g[i][j] = g[j][i] = draw(st.integers(-bound, bound))
    return g


# ---------------------------------------------------------------------------
# det_exact
# ---------------------------------------------------------------------------
@pytest.mark.parametrize(
    "m, expected",
    [
        ([[3, 0, 0], [0, 4, 0], [0, 0, 6]], 72),
        ([[3, 4], [4, 10]], 14),
        ([[3, 1, 1], [1, 5, 0], [1, 0, 9]], 121),
        ([[0, 1], [1, 0]], -1),
        ([[1, 2], [2, 4]], 0),
        ([], 1),
    ],
)
def test_det_exact_examples(m, expected):
    assert det_exact(m) == expected


def test_det_exact_needs_pivoting():
    assert det_exact([[0, 0, 1], [0, 1, 0], [1, 0, 0]]) == -1


def test_det_exact_is_arbitrary_precision():
    big = 10**30
    assert det_exact([[big, 1], [1, big]]) == big * big - 1


def test_det_exact_rejects_non_square():
    with pytest.raises(DimensionError):
        det_exact([[1, 2, 3], [4, 5, 6]])


def test_det_exact_matches_cofactor_expansion():
    rng = random.Random(20240)
    for _ in range(N_RANDOM):
        n = rng.randint(1, 5)
        m = random_matrix(rng, n, n)
        assert det_exact(m) == cofactor_det(m)


def test_as_int_matrix_rejects_floats_and_ragged_rows():
    with pytest.raises(ShapeError):
        as_int_matrix([[1.5, 2]])
    with pytest.raises(ShapeError):
        as_int_matrix([[1, 2], [3]])


# ---------------------------------------------------------------------------
# smith_normal_form
# ---------------------------------------------------------------------------
def check_snf(m):
    a = as_int_matrix(m)
    snf = smith_normal_form(a)
    assert (snf.u @ a @ snf.v == snf.d).all()
    assert abs(det_exact(snf.u)) == 1
    assert abs(det_exact(snf.v)) == 1
    n_rows, n_cols = a.shape
    for i in range(n_rows):
        for j in range(n_cols):
            if i != j:
                assert snf.d[i, j] == 0
    factors = snf.invariant_factors
    assert all(x > 0 for x in factors)
    assert all(factors[k + 1] % factors[k] == 0 for k in range(len(factors) - 1))
    assert snf.diagonal[len(factors):] == (0,) * (len(snf.diagonal) - len(factors))
    if n_rows == n_cols:
        assert abs(det_exact(snf.d)) == abs(det_exact(a))
    return snf


@pytest.mark.parametrize(
    "m, diagonal",
    [
        (identity(3), (1, 1, 1)),
        ([[2, 0], [0, 4]], (2, 4)),
        ([[2, 4], [6, 8]], (2, 4)),
        ([[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]], (1, 10, 30, 0)),
        ([[2, 4]], (2,)),
        ([[0, 0], [0, 0]], (0, 0)),
    ],
)
def test_smith_normal_form_examples(m, diagonal):
    assert check_snf(m).diagonal == diagonal


def test_smith_normal_form_random_reconstruction():
    rng = random.Random(7)
    for _ in range(N_RANDOM):
        check_snf(random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6)))


@seed(11)
@settings(max_examples=150)
@given(int_matrices())
def test_smith_normal_form_hypothesis(m):
    snf = check_snf(m)
    assert snf.rank == rank(m)


# ---------------------------------------------------------------------------
# integer_kernel / solve_integer
# ---------------------------------------------------------------------------
def test_integer_kernel_of_row_sum():
    m = as_int_matrix([[1, 1, 1]])
    k = integer_kernel(m)
    assert k.shape == (2, 3)
    assert (m @ k.T == 0).all()
    assert rank(k) == 2
    assert smith_normal_form(k).invariant_factors == (1, 1)


def test_integer_kernel_of_identity_is_empty():
    assert integer_kernel(identity(3)).shape == (0, 3)


def test_integer_kernel_is_saturated():
    # x + 2y = 0 has kernel spanned by (2, -1), not (4, -2)
    k = integer_kernel([[1, 2]])
    assert k.shape == (1, 2)
    assert sorted(abs(x) for x in k[0]) == [1, 2]


@seed(3)
@settings(max_examples=100)
@given(int_matrices(max_dim=5, bound=9))
def test_integer_kernel_annihilates(m):
    a = as_int_matrix(m)
    k = integer_kernel(a)
    assert k.shape[0] == a.shape[1] - rank(a)
    if k.shape[0]:
        assert (a @ k.T == 0).all()
        assert all(x == 1 for x in smith_normal_form(k).invariant_factors)


def test_solve_integer():
    assert solve_integer([[2, 0], [0, 3]], [4, 9]) == (2, 3)
    assert solve_integer([[2, 0], [0, 3]], [1, 0]) is None
    x = solve_integer([[1, 1, 1]], [5])
    assert sum(x) == 5
    with pytest.raises(DimensionError):
        solve_integer([[1, 0]], [1, 2])


# ---------------------------------------------------------------------------
# signature / is_positive_definite
# ---------------------------------------------------------------------------
@pytest.mark.parametrize(
    "g, expected",
    [
        ([[3, 0], [0, 2]], (2, 0, 0)),
        ([[0, 1], [1, 0]], (1, 1, 0)),
        ([[1, 1], [1, 1]], (1, 0, 1)),
        ([[0, 0], [0, 0]], (0, 0, 2)),
        ([[-2, 1], [1, -2]], (0, 2, 0)),
    ],
)
def test_signature_examples(g, expected):
    assert signature(g) == expected


def test_signature_of_ambient_lattice(ambient):
    assert signature(ambient.gram.entries) == (21, 2, 0)


def test_signature_rejects_non_symmetric():
    with pytest.raises(ShapeError):
        signature([[1, 2], [3, 4]])
    with pytest.raises(ShapeError):
        is_positive_definite([[1, 2], [3, 4]])


@pytest.mark.parametrize(
    "g, expected",
    [
        ([[3, 1], [1, 1]], True),
        ([[0, 1], [1, 0]], False),
        ([[3, 0, 0], [0, 4, 0], [0, 0, 6]], True),
        ([[1, 2], [2, 1]], False),
    ],
)
def test_is_positive_definite_examples(g, expected):
    assert is_positive_definite(g) is expected


@seed(5)
@settings(max_examples=200)
@given(symmetric_matrices())
def test_signature_agrees_with_sylvester_and_rank(g):
    n = len(g)
    pos, neg, zero = signature(g)
    assert pos + neg + zero == n
    assert n - zero == rank(g)
    assert is_positive_definite(g) == (signature(g) == (n, 0, 0))


def test_signature_is_a_congruence_invariant():
    rng = random.Random(99)
    checked = 0
    while checked < 200:
        n = rng.randint(1, 4)
        g = as_int_matrix(random_matrix(rng, n, n, bound=4))
        g = g + g.T
        p = as_int_matrix(random_matrix(rng, n, n, bound=3))
        if det_exact(p) == 0:
            continue
        assert signature(p.T @ g @ p) == signature(g)
        checked += 1


# ---------------------------------------------------------------------------
# GramMatrix
# ---------------------------------------------------------------------------
def test_gram_matrix_is_read_only():
    g = GramMatrix([[2, 1], [1, 2]])
    with pytest.raises(ValueError):
        g.entries[0, 0] = 5
    assert g.det == 3
    assert g.signature == (2, 0, 0)
    assert g.positive_definite
    assert g.norm([1, -1]) == 2
    assert g.bilinear([1, 0], [0, 1]) == 1
    assert g == GramMatrix(np.array([[2, 1], [1, 2]]))


def test_gram_matrix_rejects_non_symmetric():
    with pytest.raises(ShapeError):
        GramMatrix([[1, 2], [3, 4]])
