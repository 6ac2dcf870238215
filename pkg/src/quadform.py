"""Positive definite forms: short vectors, representation of small integers,
binary reduction, and the search for K2 / K6 sublattices through h^2.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

from src.errors import ConsistencyError, DefinitenessError, PreconditionError, ShapeError
from src.exact_linalg import GramMatrix, as_int_matrix, is_positive_definite
from src.lattice_core import EmbeddedSublattice

logger = logging.getLogger(__name__)

K2 = GramMatrix([[3, 1], [1, 1]])
K6 = GramMatrix([[3, 0], [0, 2]])

Coords = Tuple[int, ...]


@dataclass(frozen=True)
class ShortVectorList:
    """Nonzero vectors with norm <= bound, one per +/- pair, sorted by (norm, coords)."""

    bound: int
    vectors: Tuple[Tuple[Coords, int], ...]

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def norms(self) -> Tuple[int, ...]:
        return tuple(norm for _, norm in self.vectors)


def _definite(g) -> List[List[int]]:
    a = as_int_matrix(g)
    if a.shape[0] != a.shape[1] or not (a == a.T).all():
        raise ShapeError("expected a symmetric matrix")
    if not is_positive_definite(a):
        raise DefinitenessError("form is not positive definite")
    return a.tolist()


def _cholesky(g: List[List[int]]) -> List[List[Fraction]]:
    """Rational decomposition Q(x) = sum_i q[i][i] * (x_i + sum_{j>i} q[i][j] x_j)^2."""
    n = len(g)
    q = [[Fraction(x) for x in row] for row in g]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def _enumerate(q: List[List[Fraction]], bound: int) -> Iterator[Coords]:
    """Fincke-Pohst descent over the last coordinate first, every interval exact."""
    n = len(q)
    x = [0] * n

    def descend(i: int, remaining: Fraction) -> Iterator[Coords]:
        center = -sum((q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        radius_sq = remaining / q[i][i]
        s = math.isqrt(math.floor(radius_sq))
        for xi in range(math.floor(center) - s, math.ceil(center) + s + 1):
            used = q[i][i] * (xi - center) ** 2
            if used > remaining:
                continue
            x[i] = xi
            if i == 0:
                yield tuple(x)
            else:
                yield from descend(i - 1, remaining - used)
        x[i] = 0

    if n:
        yield from descend(n - 1, Fraction(bound))


def _norm(g: List[List[int]], v: Coords) -> int:
    return sum(g[i][j] * v[i] * v[j] for i in range(len(v)) for j in range(len(v)))


def short_vectors(g, bound: int) -> ShortVectorList:
    rows = _definite(g)
    if bound < 1:
        raise PreconditionError(f"bound must be at least 1, got {bound}")
    found = []
    for v in _enumerate(_cholesky(rows), bound):
        first = next((c for c in v if c != 0), 0)
        if first <= 0:
            continue
        norm = _norm(rows, v)
        if 0 < norm <= bound:
            found.append((v, norm))
    found.sort(key=lambda item: (item[1], item[0]))
    return ShortVectorList(bound=bound, vectors=tuple(found))


def min_norm(g) -> int:
    """Minimum of the form on nonzero vectors.

    Some basis vector attains the smallest diagonal entry, so enumerating up
    to that bound always finds the minimum.
    """
    rows = _definite(g)
    if not rows:
        raise PreconditionError("the zero lattice has no minimum")
    bound = min(rows[i][i] for i in range(len(rows)))
    return short_vectors(rows, bound).vectors[0][1]


def represents(g, n: int) -> bool:
    if n < 1:
        raise PreconditionError(f"can only test representation of positive integers, got {n}")
    return any(norm == n for _, norm in short_vectors(g, n))


def reduce_binary(g) -> GramMatrix:
    """Lagrange-reduced Gram matrix [[a, b], [b, c]] with 0 <= 2b <= a <= c.

    Two positive definite binary forms are isometric iff they reduce to the
    same matrix.
    """
    rows = _definite(g)
    if len(rows) != 2:
        raise ShapeError(f"expected a 2x2 form, got {len(rows)}x{len(rows)}")
    (a, b), (_, c) = rows
    while True:
        if c < a:
            a, c = c, a
        q = (2 * b + a) // (2 * a)
        b, c = b - q * a, c - 2 * q * b + q * q * a
        if 2 * abs(b) <= a <= c:
            break
    return GramMatrix([[a, abs(b)], [abs(b), c]])


K2_REDUCED = reduce_binary(K2)
K6_REDUCED = reduce_binary(K6)


@dataclass(frozen=True)
class FoundSublattice:
    """A rank-2 sublattice <h^2, r> isometric to K2 or K6."""

    name: str
    r_coords: Coords
    gram: GramMatrix


def _h_pairings(m: EmbeddedSublattice):
    if m.h_coords is None:
        raise PreconditionError("sublattice does not contain h^2")
    g = m.gram
    for v, norm in short_vectors(g.entries, 2):
        a = g.bilinear(m.h_coords, v)
        if a < 0:
            v, a = tuple(-c for c in v), -a
        yield v, norm, a


def find_k2_or_k6(m: EmbeddedSublattice) -> Optional[FoundSublattice]:
    """Literal search for h^2 in K subset M with K isometric to K2 or K6."""
    for v, norm, a in _h_pairings(m):
        k = GramMatrix([[3, a], [a, norm]])
        if k.det <= 0:
            continue
        reduced = reduce_binary(k)
        for name, target in (("K2", K2_REDUCED), ("K6", K6_REDUCED)):
            if reduced == target:
                logger.debug("found %s through h2 with r=%s", name, v)
                return FoundSublattice(name=name, r_coords=v, gram=k)
    return None


@dataclass(frozen=True)
class Obstruction:
    """A short vector r of M and the form <h^2, r> it spans."""

    case: str
    r_coords: Coords
    norm: int
    pairing: int


def lemma_obstruction(m: EmbeddedSublattice) -> Optional[Obstruction]:
    """Classify the first vector of norm <= 2 by its pairing a = (h^2.r) >= 0.

    norm 2, a = 0 spans K6; norm 2, a = 2 and norm 1, a = 1 span K2. The
    remaining cases would put an odd vector in the even lattice L0
    (h^2 - 3r of norm 15, or r itself of norm 1), so they cannot occur in L.
    """
    for v, norm, a in _h_pairings(m):
        if (norm, a) == (2, 0):
            case = "K6"
        elif (norm, a) in ((2, 2), (1, 1)):
            case = "K2"
        elif (norm, a) in ((2, 1), (1, 0)):
            raise ConsistencyError(f"vector {v} of norm {norm} with (h2.r)={a} would make L0 odd")
        else:
            # a^2 >= 3 * norm forces r to be a multiple of h^2, impossible at norm <= 2
            raise ConsistencyError(f"vector {v} of norm {norm} with (h2.r)={a} is not definite with h2")
        return Obstruction(case=case, r_coords=v, norm=norm, pairing=a)
    return None
