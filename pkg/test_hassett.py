from dataclasses import replace

import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from src.errors import PreconditionError, ShapeError
from src.hassett import (
    PAIR,
    TRIPLE,
    LabelledSublattice,
    check_pair,
    divisor_label,
    expected_pair_det,
    is_admissible,
    pair_witness,
    rational_loci,
    satisfies_star,
    star_values,
    sweep,
    sweep_pairs,
    triple_witness,
    user_witness,
    verify,
    witness_case,
)
from src.lattice_core import build_ambient
from src.quadform import min_norm

star_pairs = st.tuples(
    st.integers(8, 200).filter(satisfies_star),
    st.integers(8, 200).filter(satisfies_star),
)


# ---------------------------------------------------------------------------
# Sieves
# ---------------------------------------------------------------------------
@pytest.mark.parametrize("d, expected", [(14, True), (6, False), (10, False), (8, True), (12, True), (7, False)])
def test_satisfies_star(d, expected):
    assert satisfies_star(d) is expected


@pytest.mark.parametrize("d, expected", [(14, True), (26, True), (38, True), (8, False), (18, False), (42, True)])
def test_is_admissible(d, expected):
    assert is_admissible(d) is expected


def test_admissible_values_up_to_50():
    assert [d for d in range(1, 51) if is_admissible(d)] == [14, 26, 38, 42]


def test_admissible_implies_star():
    for d in range(1, 500):
        if is_admissible(d):
            assert satisfies_star(d)


def test_divisor_label():
    label = divisor_label(20)
    assert label.satisfies_star and not label.admissible


def test_star_values():
    assert star_values(40) == [8, 12, 14, 18, 20, 24, 26, 30, 32, 36, 38]
    assert len(star_values(100)) == 31
    assert 100 not in star_values(100)


# ---------------------------------------------------------------------------
# Witness construction
# ---------------------------------------------------------------------------
def test_witness_case_dispatch():
    assert witness_case(12, 18) == (1, 12, 18)
    assert witness_case(12, 14) == (2, 12, 14)
    assert witness_case(14, 12) == (2, 12, 14)
    assert witness_case(26, 14) == (3, 26, 14)
    with pytest.raises(PreconditionError):
        witness_case(10, 12)


@pytest.mark.parametrize(
    "d1, d2, gram, det",
    [
        (12, 18, [[3, 0, 0], [0, 4, 0], [0, 0, 6]], 72),
        (12, 14, [[3, 0, 1], [0, 4, 0], [1, 0, 5]], 56),
        (14, 26, [[3, 1, 1], [1, 5, 0], [1, 0, 9]], 121),
    ],
)
def test_pair_witness_gram(d1, d2, gram, det):
    w = pair_witness(d1, d2)
    assert w.lattice.gram.tolist() == gram
    assert w.lattice.gram.det == det
    assert w.expected_det == det
    assert w.lattice.h_coords == (1, 0, 0)


def test_pair_witness_rejects_invalid_discriminants():
    with pytest.raises(PreconditionError):
        pair_witness(10, 12)
    with pytest.raises(PreconditionError):
        triple_witness(9, 12)


@pytest.mark.parametrize("d1, d2, expected", [(12, 18, 72), (14, 26, 121), (14, 14, 65), (12, 14, 56)])
def test_expected_pair_det(d1, d2, expected):
    assert expected_pair_det(d1, d2) == expected
    assert expected_pair_det(d2, d1) == expected


def test_pair_witness_allows_equal_discriminants():
    w = pair_witness(14, 14)
    assert w.lattice.gram.det == 65
    assert verify(w).passed


def test_triple_witness_case1():
    w = triple_witness(12, 18)
    assert w.lattice.gram.tolist() == [[3, 4, 0, 0], [4, 10, 0, 0], [0, 0, 4, 0], [0, 0, 0, 6]]
    assert w.lattice.gram.det == 336
    assert w.expected_det is None
    assert [label.discriminant for label in w.labels] == [14, 12, 18]


def test_triple_witness_case3(case3_triple):
    report = verify(case3_triple)
    assert report.min_norm == 3
    assert report.represents_two is False
    assert report.passed
    assert [s.det for s in report.sub_reports] == [14, 14, 26]


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------
def test_verify_case1(case1_witness):
    report = verify(case1_witness)
    assert report.passed
    assert report.kind == PAIR
    assert report.case == 1
    assert report.det_m == report.expected_det == 72
    assert report.codimension == 2
    assert report.signature == (3, 0, 0)
    assert report.obstruction is None
    assert [(s.name, s.det, s.saturated_in_parent) for s in report.sub_reports] == [
        ("K_d1", 12, True),
        ("K_d2", 18, True),
    ]


def test_verify_k6_lattice_fails():
    ambient = build_ambient()
    report = verify(user_witness([ambient.h_squared, ambient.e1 + ambient.f1]))
    assert not report.passed
    assert report.represents_two is True
    assert report.obstruction == "K6"


def test_verify_non_saturated_fails():
    report = verify(user_witness([2 * build_ambient().h_squared]))
    assert not report.passed
    assert report.saturated_in_L is False
    assert report.contains_h2 is False


def test_user_witness_rejects_label_of_wrong_width(case1_witness):
    basis = case1_witness.lattice.basis.tolist()
    label = LabelledSublattice(name="K_d1", coords=((1, 0),), discriminant=12)
    with pytest.raises(ShapeError, match="K_d1"):
        user_witness(basis, labels=[label])


def test_verify_indefinite_lattice():
    ambient = build_ambient()
    report = verify(user_witness([ambient.h_squared, ambient.e1]))
    assert not report.positive_definite
    assert report.min_norm is None and report.represents_two is None
    assert not report.passed


def test_verify_detects_wrong_expected_det(case1_witness):
    report = verify(replace(case1_witness, expected_det=73))
    assert not report.passed


# ---------------------------------------------------------------------------
# Rational loci
# ---------------------------------------------------------------------------
@pytest.mark.parametrize("d, dets", [(12, (56, 104, 152)), (14, (65, 121, 177))])
def test_rational_loci(d, dets):
    loci = rational_loci(d)
    assert loci.determinants == dets
    assert loci.distinct and loci.passed


def test_rational_loci_rejects_invalid():
    with pytest.raises(PreconditionError):
        rational_loci(7)


@pytest.mark.slow
def test_rational_loci_up_to_100():
    for d in star_values(100):
        loci = rational_loci(d)
        assert loci.passed
        k = (14, 26, 38)
        expected = tuple((ki * d - 1) // 3 if d % 6 == 2 else ki * d // 3 for ki in k)
        assert loci.determinants == expected


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------
def test_sweep_pairs():
    assert sweep_pairs(8) == [(8, 8)]
    assert len(sweep_pairs(20)) == 15
    assert len(sweep_pairs(100)) == 496


def test_sweep_20():
    summary = sweep(20)
    assert summary.values == (8, 12, 14, 18, 20)
    assert summary.pairs_checked == 15
    assert summary.passed
    assert sum(summary.case_tallies.values()) == 15
    assert [row.kind for row in summary.rows[:2]] == [PAIR, TRIPLE]


def test_sweep_8():
    summary = sweep(8)
    assert summary.pairs_checked == 1
    assert summary.failures == ()


def test_sweep_rejects_small_max():
    with pytest.raises(PreconditionError):
        sweep(7)


def test_sweep_is_independent_of_jobs():
    assert sweep(26, jobs=2).rows == sweep(26, jobs=1).rows


@pytest.mark.slow
def test_sweep_up_to_100():
    summary = sweep(100, jobs=2)
    assert summary.pairs_checked == 496
    assert summary.passed
    for row in summary.rows:
        if row.kind == PAIR:
            assert row.det_m == expected_pair_det(row.d1, row.d2)


def test_check_pair_triple_sub_determinants():
    pair_row, triple_row = check_pair((20, 32))
    assert pair_row.passed and triple_row.passed
    report = verify(triple_witness(20, 32))
    assert sorted(s.det for s in report.sub_reports) == sorted([14, 20, 32])


@seed(13)
@settings(max_examples=60)
@given(star_pairs)
def test_pair_witness_permutation_invariance(pair):
    d1, d2 = pair
    a, b = pair_witness(d1, d2), pair_witness(d2, d1)
    assert a.lattice.gram.det == b.lattice.gram.det == expected_pair_det(d1, d2)
    assert min_norm(a.lattice.gram) == min_norm(b.lattice.gram)
    assert sorted(a.lattice.gram.entries.flatten().tolist()) == sorted(b.lattice.gram.entries.flatten().tolist())


@seed(14)
@settings(max_examples=40)
@given(star_pairs)
def test_witnesses_pass_for_larger_discriminants(pair):
    assert verify(pair_witness(*pair)).passed
    assert verify(triple_witness(*pair)).passed
