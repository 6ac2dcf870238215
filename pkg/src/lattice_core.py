"""The ambient lattice L = E8 + E8 + U + U + I3,0 and sublattices embedded in it.

Fixed index layout (frozen; every witness and file format relies on it):

    0-7    first E8 copy (Bourbaki numbering of the Dynkin diagram)
    8-15   second E8 copy
    16,17  e1, f1   (first hyperbolic plane U1)
    18,19  e2, f2   (second hyperbolic plane U2)
    20-22  standard basis of I3,0

h^2 = (1,1,1) and nu = (3,1,0) in the I3,0 block.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np

from src.errors import PreconditionError, RankError, ShapeError
from src.exact_linalg import (
    GramMatrix,
    IntMatrix,
    as_int_matrix,
    as_int_vector,
    integer_kernel,
    rank,
    smith_normal_form,
    solve_integer,
)

logger = logging.getLogger(__name__)

RANK = 23
E8_BLOCKS = ((0, 8), (8, 16))
E1, F1, E2, F2 = 16, 17, 18, 19
I3_BLOCK = (20, 21, 22)

# Edges of the E8 Dynkin diagram, Bourbaki labels 1..8 shifted to 0..7.
E8_EDGES = ((0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3))

AMBIENT_CONVENTION = (
    "E8=Cartan(Bourbaki);layout-v1:0-7 E8,8-15 E8,16-17 U1(e1,f1),"
    "18-19 U2(e2,f2),20-22 I3,0;h2=(1,1,1);nu=(3,1,0)"
)

LatticeVector = np.ndarray


def e8_gram() -> IntMatrix:
    """Positive definite even unimodular Gram matrix of E8 (the Cartan matrix)."""
    g = np.zeros((8, 8), dtype=object)
    for i in range(8):
        g[i, i] = 2
    for i, j in E8_EDGES:
        g[i, j] = g[j, i] = -1
    return g


def lattice_vector(coords: Sequence[int]) -> LatticeVector:
    v = as_int_vector(coords)
    if len(v) != RANK:
        raise ShapeError(f"lattice vectors have {RANK} coordinates, got {len(v)}")
    v.flags.writeable = False
    return v


def unit(index: int) -> LatticeVector:
    coords = [0] * RANK
    coords[index] = 1
    return lattice_vector(coords)


def i3_vector(a: int, b: int, c: int) -> LatticeVector:
    coords = [0] * RANK
    coords[I3_BLOCK[0]], coords[I3_BLOCK[1]], coords[I3_BLOCK[2]] = a, b, c
    return lattice_vector(coords)


@dataclass(frozen=True, eq=False)
class AmbientLattice:
    gram: GramMatrix
    h_squared: LatticeVector
    e1: LatticeVector
    f1: LatticeVector
    e2: LatticeVector
    f2: LatticeVector
    i3_unit0: LatticeVector
    i3_unit1: LatticeVector
    i3_unit2: LatticeVector
    nu: LatticeVector
    convention: str = AMBIENT_CONVENTION

    def inner_product(self, u, v) -> int:
        return int(lattice_vector(u) @ self.gram.entries @ lattice_vector(v))


@lru_cache(maxsize=1)
def build_ambient() -> AmbientLattice:
    g = np.zeros((RANK, RANK), dtype=object)
    for start, stop in E8_BLOCKS:
        g[start:stop, start:stop] = e8_gram()
    for e, f in ((E1, F1), (E2, F2)):
        g[e, f] = g[f, e] = 1
    for i in I3_BLOCK:
        g[i, i] = 1
    return AmbientLattice(
        gram=GramMatrix(g),
        h_squared=i3_vector(1, 1, 1),
        e1=unit(E1),
        f1=unit(F1),
        e2=unit(E2),
        f2=unit(F2),
        i3_unit0=i3_vector(1, 0, 0),
        i3_unit1=i3_vector(0, 1, 0),
        i3_unit2=i3_vector(0, 0, 1),
        nu=i3_vector(3, 1, 0),
    )


def inner_product(u, v) -> int:
    return build_ambient().inner_product(u, v)


@dataclass(frozen=True, eq=False)
class EmbeddedSublattice:
    """Sublattice M of L given by an ordered basis (rows of ``basis``)."""

    basis: IntMatrix
    gram: GramMatrix
    h_coords: Optional[Tuple[int, ...]]

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    @property
    def contains_h2(self) -> bool:
        return self.h_coords is not None

    def vector(self, coords: Sequence[int]) -> LatticeVector:
        """The element of L with the given coordinates in this basis."""
        return lattice_vector(as_int_vector(coords) @ self.basis)

    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(row) for row in self.basis.tolist())


def _embed(basis: IntMatrix) -> EmbeddedSublattice:
    ambient = build_ambient()
    basis = as_int_matrix(basis, RANK)
    basis.flags.writeable = False
    gram = GramMatrix(basis @ ambient.gram.entries @ basis.T) if basis.shape[0] else GramMatrix([])
    h_coords = solve_integer(basis.T, ambient.h_squared) if basis.shape[0] else None
    return EmbeddedSublattice(basis=basis, gram=gram, h_coords=h_coords)


def sublattice_from_basis(vs: Sequence[Sequence[int]]) -> EmbeddedSublattice:
    vectors = [lattice_vector(v) for v in vs]
    if not vectors:
        raise PreconditionError("a sublattice needs at least one basis vector")
    basis = as_int_matrix(vectors, RANK)
    if rank(basis) < len(vectors):
        raise RankError(f"basis of {len(vectors)} vectors is linearly dependent")
    m = _embed(basis)
    logger.debug("embedded rank-%d sublattice, det %d, h2 coords %s", m.rank, m.gram.det, m.h_coords)
    return m


def _unit_invariant_factors(rows: IntMatrix) -> bool:
    snf = smith_normal_form(rows)
    return snf.rank == rows.shape[0] and all(x == 1 for x in snf.invariant_factors)


def is_saturated_in_L(m: EmbeddedSublattice) -> bool:
    """L/M is torsion free iff every invariant factor of the basis is 1."""
    return _unit_invariant_factors(m.basis)


def is_saturated_in(m: EmbeddedSublattice, k_coords) -> bool:
    """Saturation of K inside M, K given by coordinate rows in M's basis."""
    k = as_int_matrix(k_coords, m.rank)
    if k.shape[1] != m.rank:
        raise ShapeError(f"coordinate rows must have width {m.rank}, got {k.shape[1]}")
    if rank(k) < k.shape[0]:
        raise RankError("coordinate rows of the sublattice are linearly dependent")
    return _unit_invariant_factors(k)


def orthogonal_complement(m: EmbeddedSublattice) -> EmbeddedSublattice:
    """Saturated basis of {v in L : (v.b) = 0 for every basis vector b of m}."""
    pairing = m.basis @ build_ambient().gram.entries
    return _embed(integer_kernel(as_int_matrix(pairing, RANK)))


def is_even(g) -> bool:
    a = as_int_matrix(g)
    return all(a[i, i] % 2 == 0 for i in range(a.shape[0]))


def primitive_sublattice() -> EmbeddedSublattice:
    """L0, the orthogonal complement of h^2."""
    return orthogonal_complement(sublattice_from_basis([build_ambient().h_squared]))
