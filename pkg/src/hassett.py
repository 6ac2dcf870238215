"""Witness lattices for intersections of Hassett divisors, and their verification.

A discriminant d is valid when d > 6 and d = 0, 2 (mod 6). For d = 6n the
divisor vector in the i-th hyperbolic plane is e_i + n f_i; for d = 6n + 2 it
is e_i + n f_i plus a unit vector of I3,0 ((0,1,0) for the first plane,
(0,0,1) for the second). Together with h^2 (and nu for the triple witness)
these span the witness M, and <h^2, v_i> is the rank-2 labelling of
discriminant d_i inside it.
"""
import logging
from dataclasses import dataclass, field, replace
from multiprocessing import Pool
from typing import Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from src.app_config import RATIONAL_DISCRIMINANTS
from src.errors import ConsistencyError, PreconditionError, RankError, ShapeError
from src.exact_linalg import GramMatrix, as_int_matrix
from src.lattice_core import (
    EmbeddedSublattice,
    LatticeVector,
    build_ambient,
    is_saturated_in,
    is_saturated_in_L,
    sublattice_from_basis,
)
from src.quadform import lemma_obstruction, min_norm, represents

logger = logging.getLogger(__name__)

PAIR = "pair-witness"
TRIPLE = "triple-witness"
RATIONAL_LOCI = "rational-loci"
USER = "user-supplied"

STAR_CONDITION = "d > 6 and d = 0, 2 (mod 6)"


# ---------------------------------------------------------------------------
# Divisor sieves
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class DivisorLabel:
    d: int
    satisfies_star: bool
    admissible: bool


def satisfies_star(d: int) -> bool:
    return d > 6 and d % 6 in (0, 2)


def _odd_prime_factors(d: int) -> List[int]:
    d = abs(d)
    while d % 2 == 0 and d:
        d //= 2
    primes = []
    p = 3
    while p * p <= d:
        if d % p == 0:
            primes.append(p)
            while d % p == 0:
                d //= p
        p += 2
    if d > 1:
        primes.append(d)
    return primes


def is_admissible(d: int) -> bool:
    """(*) plus 4, 9 and every odd prime p = 2 (mod 3) not dividing d."""
    if not satisfies_star(d) or d % 4 == 0 or d % 9 == 0:
        return False
    return all(p % 3 != 2 for p in _odd_prime_factors(d))


def divisor_label(d: int) -> DivisorLabel:
    return DivisorLabel(d=d, satisfies_star=satisfies_star(d), admissible=is_admissible(d))


def star_values(max_d: int) -> List[int]:
    return [d for d in range(7, max_d + 1) if satisfies_star(d)]


def _require_star(*ds: int) -> None:
    for d in ds:
        if not satisfies_star(d):
            raise PreconditionError(f"d={d} is not a Hassett discriminant: need {STAR_CONDITION}")


# ---------------------------------------------------------------------------
# Witness construction
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class LabelledSublattice:
    """K inside M, as coordinate rows in M's basis, with its target discriminant."""

    name: str
    coords: Tuple[Tuple[int, ...], ...]
    discriminant: int


@dataclass(frozen=True, eq=False)
class Witness:
    kind: str
    lattice: EmbeddedSublattice
    labels: Tuple[LabelledSublattice, ...] = ()
    expected_det: Optional[int] = None
    d1: Optional[int] = None
    d2: Optional[int] = None
    case: Optional[int] = None


def witness_case(d1: int, d2: int) -> Tuple[int, int, int]:
    """(case, d1, d2): case 1 both 0 mod 6, 2 mixed, 3 both 2 mod 6.

    In the mixed case the multiple of 6 is moved to d1; otherwise the order
    is left alone.
    """
    _require_star(d1, d2)
    zero1, zero2 = d1 % 6 == 0, d2 % 6 == 0
    if zero1 and zero2:
        return 1, d1, d2
    if zero1 or zero2:
        return (2, d1, d2) if zero1 else (2, d2, d1)
    return 3, d1, d2


def expected_pair_det(d1: int, d2: int) -> int:
    _require_star(d1, d2)
    numerator = d1 * d2 - 1 if d1 % 6 == 2 and d2 % 6 == 2 else d1 * d2
    if numerator % 3:
        raise ConsistencyError(f"expected determinant {numerator}/3 for ({d1}, {d2}) is not an integer")
    return numerator // 3


def _divisor_vector(slot: int, d: int) -> LatticeVector:
    ambient = build_ambient()
    e, f, correction = (
        (ambient.e1, ambient.f1, ambient.i3_unit1)
        if slot == 1
        else (ambient.e2, ambient.f2, ambient.i3_unit2)
    )
    n = d // 6
    v = e + n * f
    if d % 6 == 2:
        v = v + correction
    return v


def _label_rows(rank: int, *indices: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(1 if j == i else 0 for j in range(rank)) for i in indices)


def pair_witness(d1: int, d2: int) -> Witness:
    case, d1, d2 = witness_case(d1, d2)
    h = build_ambient().h_squared
    m = sublattice_from_basis([h, _divisor_vector(1, d1), _divisor_vector(2, d2)])
    labels = (
        LabelledSublattice("K_d1", _label_rows(3, 0, 1), d1),
        LabelledSublattice("K_d2", _label_rows(3, 0, 2), d2),
    )
    logger.debug("pair witness (%d, %d), case %d", d1, d2, case)
    return Witness(
        kind=PAIR,
        lattice=m,
        labels=labels,
        expected_det=expected_pair_det(d1, d2),
        d1=d1,
        d2=d2,
        case=case,
    )


def triple_witness(d1: int, d2: int) -> Witness:
    """Rank-4 witness <h^2, nu, v1, v2> for the intersection with C_14.

    No determinant is prescribed for it; the verification establishes
    minimum and saturation directly.
    """
    case, d1, d2 = witness_case(d1, d2)
    ambient = build_ambient()
    m = sublattice_from_basis(
        [ambient.h_squared, ambient.nu, _divisor_vector(1, d1), _divisor_vector(2, d2)]
    )
    labels = (
        LabelledSublattice("K_14", _label_rows(4, 0, 1), 14),
        LabelledSublattice("K_d1", _label_rows(4, 0, 2), d1),
        LabelledSublattice("K_d2", _label_rows(4, 0, 3), d2),
    )
    logger.debug("triple witness (%d, %d), case %d", d1, d2, case)
    return Witness(kind=TRIPLE, lattice=m, labels=labels, d1=d1, d2=d2, case=case)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SubReport:
    name: str
    coords: Tuple[Tuple[int, ...], ...]
    gram: Tuple[Tuple[int, ...], ...]
    det: int
    discriminant: int
    saturated_in_parent: bool

    @property
    def ok(self) -> bool:
        return self.saturated_in_parent and self.det == self.discriminant


@dataclass(frozen=True)
class WitnessReport:
    kind: str
    d1: Optional[int]
    d2: Optional[int]
    case: Optional[int]
    basis: Tuple[Tuple[int, ...], ...]
    gram: Tuple[Tuple[int, ...], ...]
    signature: Tuple[int, int, int]
    positive_definite: bool
    saturated_in_L: bool
    contains_h2: bool
    h_coords: Optional[Tuple[int, ...]]
    represents_two: Optional[bool]
    min_norm: Optional[int]
    det_m: int
    expected_det: Optional[int]
    codimension: int
    sub_reports: Tuple[SubReport, ...] = ()
    obstruction: Optional[str] = None
    passed: bool = field(default=False)


def failed_checks(report: WitnessReport) -> List[str]:
    """Names of the checks a report fails; empty iff the report passes."""
    failures = []
    if not report.positive_definite:
        failures.append("positive_definite")
    if not report.saturated_in_L:
        failures.append("saturated_in_L")
    if not report.contains_h2:
        failures.append("contains_h2")
    if report.represents_two is not False:
        failures.append("represents_two")
    if report.min_norm is None or report.min_norm < 3:
        failures.append("min_norm")
    if report.expected_det is not None and report.det_m != report.expected_det:
        failures.append("det_m")
    failures.extend(f"sub_report:{s.name}" for s in report.sub_reports if not s.ok)
    return failures


def _sub_report(m: EmbeddedSublattice, label: LabelledSublattice) -> SubReport:
    k = as_int_matrix(label.coords, m.rank)
    gram = GramMatrix(k @ m.gram.entries @ k.T)
    try:
        saturated = is_saturated_in(m, k)
    except RankError:
        saturated = False
    return SubReport(
        name=label.name,
        coords=label.coords,
        gram=tuple(map(tuple, gram.tolist())),
        det=gram.det,
        discriminant=label.discriminant,
        saturated_in_parent=saturated,
    )


def verify(witness: Witness) -> WitnessReport:
    """Run every check on a witness; failures are report fields, never exceptions."""
    m = witness.lattice
    g = m.gram
    definite = g.positive_definite
    represents_two = min_m = obstruction = None
    if definite:
        represents_two = represents(g.entries, 2)
        min_m = min_norm(g.entries)
        if m.contains_h2:
            found = lemma_obstruction(m)
            obstruction = found.case if found else None

    report = WitnessReport(
        kind=witness.kind,
        d1=witness.d1,
        d2=witness.d2,
        case=witness.case,
        basis=m.rows(),
        gram=tuple(map(tuple, g.tolist())),
        signature=g.signature,
        positive_definite=definite,
        saturated_in_L=is_saturated_in_L(m),
        contains_h2=m.contains_h2,
        h_coords=m.h_coords,
        represents_two=represents_two,
        min_norm=min_m,
        det_m=g.det,
        expected_det=witness.expected_det,
        codimension=m.rank - 1,
        sub_reports=tuple(_sub_report(m, label) for label in witness.labels),
        obstruction=obstruction,
    )
    failures = failed_checks(report)
    if failures:
        logger.warning("%s (%s, %s) failed: %s", witness.kind, witness.d1, witness.d2, ", ".join(failures))
    return replace(report, passed=not failures)


def user_witness(
    basis: Sequence[Sequence[int]],
    labels: Sequence[LabelledSublattice] = (),
    expected_det: Optional[int] = None,
    kind: str = USER,
    d1: Optional[int] = None,
    d2: Optional[int] = None,
    case: Optional[int] = None,
) -> Witness:
    lattice = sublattice_from_basis(basis)
    for label in labels:
        for row in label.coords:
            if len(row) != lattice.rank:
                raise ShapeError(
                    f"{label.name}: coordinate row has {len(row)} entries, M has rank {lattice.rank}"
                )
    return Witness(
        kind=kind,
        lattice=lattice,
        labels=tuple(labels),
        expected_det=expected_det,
        d1=d1,
        d2=d2,
        case=case,
    )


# ---------------------------------------------------------------------------
# Rational loci and sweeps
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class RationalLoci:
    d: int
    reports: Tuple[WitnessReport, ...]

    @property
    def determinants(self) -> Tuple[int, ...]:
        return tuple(r.det_m for r in self.reports)

    @property
    def distinct(self) -> bool:
        return len(set(self.determinants)) == len(self.determinants)

    @property
    def passed(self) -> bool:
        return self.distinct and all(r.passed for r in self.reports)


def rational_loci(d: int) -> RationalLoci:
    """The three rank-3 witnesses for C_d meeting C_14, C_26 and C_38."""
    _require_star(d)
    reports = tuple(verify(replace(pair_witness(d, k), kind=RATIONAL_LOCI)) for k in RATIONAL_DISCRIMINANTS)
    loci = RationalLoci(d=d, reports=reports)
    if not loci.distinct:
        logger.warning("rational loci for d=%d share a determinant: %s", d, loci.determinants)
    return loci


@dataclass(frozen=True)
class SweepRow:
    kind: str
    d1: int
    d2: int
    case: int
    det_m: int
    expected_det: Optional[int]
    min_norm: Optional[int]
    passed: bool
    failures: Tuple[str, ...] = ()


@dataclass(frozen=True)
class SweepSummary:
    max_d: int
    values: Tuple[int, ...]
    rows: Tuple[SweepRow, ...]

    @property
    def pairs_checked(self) -> int:
        return sum(1 for row in self.rows if row.kind == PAIR)

    @property
    def failures(self) -> Tuple[SweepRow, ...]:
        return tuple(row for row in self.rows if not row.passed)

    @property
    def case_tallies(self) -> Dict[int, int]:
        tallies = {1: 0, 2: 0, 3: 0}
        for row in self.rows:
            if row.kind == PAIR:
                tallies[row.case] += 1
        return tallies

    @property
    def passed(self) -> bool:
        return not self.failures


def _row(report: WitnessReport) -> SweepRow:
    return SweepRow(
        kind=report.kind,
        d1=report.d1,
        d2=report.d2,
        case=report.case,
        det_m=report.det_m,
        expected_det=report.expected_det,
        min_norm=report.min_norm,
        passed=report.passed,
        failures=tuple(failed_checks(report)),
    )


def check_pair(pair: Tuple[int, int]) -> Tuple[SweepRow, SweepRow]:
    d1, d2 = pair
    return _row(verify(pair_witness(d1, d2))), _row(verify(triple_witness(d1, d2)))


def sweep_pairs(max_d: int) -> List[Tuple[int, int]]:
    values = star_values(max_d)
    return [(a, b) for i, a in enumerate(values) for b in values[i:]]


def sweep(max_d: int, jobs: int = 1, progress: bool = False) -> SweepSummary:
    """Verify pair and triple witnesses for every unordered (*) pair up to max_d.

    Results come back in pair order whatever the number of workers.
    """
    if max_d < 8:
        raise PreconditionError(f"sweep needs max_d >= 8, got {max_d}")
    pairs = sweep_pairs(max_d)
    logger.info("sweeping %d pairs up to d=%d with %d worker(s)", len(pairs), max_d, jobs)
    bar = dict(total=len(pairs), desc="Verifying witnesses", unit="pair", disable=not progress)
    if jobs > 1:
        with Pool(jobs) as pool:
            results = list(tqdm(pool.imap(check_pair, pairs, chunksize=8), **bar))
    else:
        results = [check_pair(pair) for pair in tqdm(pairs, **bar)]
    rows = tuple(row for pair_rows in results for row in pair_rows)
    summary = SweepSummary(max_d=max_d, values=tuple(star_values(max_d)), rows=rows)
    logger.info("sweep done: %d pairs, %d failures", summary.pairs_checked, len(summary.failures))
    return summary
