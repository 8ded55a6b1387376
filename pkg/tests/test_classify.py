import random
from fractions import Fraction

import pytest

from liepoisson.classify import (
    CaseLabel,
    ClassificationError,
    NotSingleBlock,
    OrderTooHigh,
    catalog,
    catalog_entry,
    classify,
    equivalence_check,
    fingerprint,
)
from liepoisson.extension import (
    abelian,
    append_semisimple,
    crmhd,
    direct_sum,
    from_lower_slices,
    leibniz,
    strip_semisimple,
    validate,
)
from liepoisson.linalg import BasisChange, ExactMatrix
from liepoisson.scalars import I, ONE, ZERO, gr
from liepoisson.transform import apply, apply_chain

M = ExactMatrix.from_rows


def test_catalog_counts_and_validity():
    assert len(catalog(2)) == 2
    assert len(catalog(3)) == 4
    assert len(catalog(4)) == 9
    for order in (1, 2, 3, 4):
        for label, t in catalog(order).entries:
            validate(t.w)
            assert label.order == order
            assert label.name.startswith(f"n{order}-")


def test_catalog_entries_are_zero_one():
    for order in (2, 3, 4):
        for _, t in catalog(order).entries:
            for plane in t.w:
                for row in plane:
                    for x in row:
                        assert x == ZERO or x == ONE


def test_catalog_order_out_of_range():
    with pytest.raises(OrderTooHigh):
        catalog(5)


def test_catalog_entries_pairwise_distinct_fingerprints():
    for order in (2, 3, 4):
        prints = [
            (label.name, tuple(fingerprint(t)["slice_ranks"]),
             tuple(fingerprint(t)["derived_dims"]), fingerprint(t)["tail_nullity"])
            for label, t in catalog(order).entries
        ]
        seen = {}
        for name, ranks, derived, nullity in prints:
            key = (ranks, derived, nullity)
            assert key not in seen, f"{name} and {seen.get(key)} share a fingerprint"
            seen[key] = name


def test_classify_normal_forms_fixed_points():
    for order in (1, 2, 3, 4):
        for label, t in catalog(order).entries:
            got, chain = classify(t)
            assert got == label
            assert apply_chain(t, chain).w == t.w


def test_classify_leibniz():
    assert classify(leibniz(3))[0] == CaseLabel(3, "n3-case4", False)
    assert classify(leibniz(4))[0] == CaseLabel(4, "n4-case4b", False)
    assert classify(leibniz(2))[0] == CaseLabel(2, "n2-case2", False)


def test_classify_crmhd_solvable_part():
    label, chain = classify(strip_semisimple(crmhd(1)))
    assert label == CaseLabel(3, "n3-case2", False)
    label, chain = classify(strip_semisimple(crmhd(Fraction(5, 2))))
    assert label.name == "n3-case2"


def test_classify_crmhd_semidirect():
    label, chain = classify(crmhd(1))
    assert label == CaseLabel(3, "n3-case2", True)
    replay = apply_chain(crmhd(1), chain)
    assert replay.w == append_semisimple(catalog(3).lookup("n3-case2")).w


def test_classify_diag11_complex_route():
    t = from_lower_slices([None, None, ExactMatrix.diagonal([1, 1, 0])], 3)
    label, chain = classify(t)
    assert label.name == "n3-case2"
    assert apply_chain(t, chain).w == catalog(3).lookup("n3-case2").w


def test_classify_direct_sum_of_leibniz2():
    t = direct_sum(leibniz(2), leibniz(2))
    label, chain = classify(t)
    assert label == CaseLabel(4, "n4-case3b", False)
    assert apply_chain(t, chain).w == catalog(4).lookup("n4-case3b").w


def test_classify_order_too_high():
    with pytest.raises(OrderTooHigh):
        classify(leibniz(5))


def test_classify_multi_block_rejected():
    t = validate([[[1]]])  # bare base bracket, eigenvalue 1 on a 1x1 block
    two = direct_sum(t, abelian(1))
    with pytest.raises(NotSingleBlock):
        classify(two)


def random_transform(rng, n):
    """Random invertible move: unit lower triangular + diagonal + occasional swap."""
    rows = [
        [gr(Fraction(rng.randint(-2, 2), rng.randint(1, 2))) if j < i else (ONE if i == j else ZERO)
         for j in range(n)]
        for i in range(n)
    ]
    m = ExactMatrix.from_rows(rows)
    diag = ExactMatrix.diagonal(
        [gr(Fraction(rng.choice([1, 1, 2, 3, -1]), rng.choice([1, 2]))) for _ in range(n)]
    )
    m = m @ diag
    if n >= 2 and rng.random() < 0.3:
        perm = list(range(n))
        i, j = rng.sample(range(n), 2)
        perm[i], perm[j] = perm[j], perm[i]
        pm = ExactMatrix.from_rows([[ONE if perm[c] == r else ZERO for c in range(n)] for r in range(n)])
        m = m @ pm
    if rng.random() < 0.25:
        m = m @ ExactMatrix.diagonal([I if k == rng.randrange(n) else ONE for k in range(n)])
    return BasisChange(m)


def test_round_trip_solvable_catalog():
    rng = random.Random(99)
    for order in (2, 3, 4):
        for label, entry in catalog(order).entries:
            for _ in range(6):
                b = random_transform(rng, order)
                moved = apply(entry, b)
                got, chain = classify(moved)
                assert got == label, f"{label.name}: got {got.name}"
                assert apply_chain(moved, chain).w == entry.w


def test_round_trip_semidirect():
    rng = random.Random(7)
    for order in (1, 2, 3):
        for label, entry in catalog(order).entries:
            sd = append_semisimple(entry)
            for _ in range(4):
                b = random_transform(rng, sd.n)
                moved = apply(sd, b)
                got, chain = classify(moved)
                assert got == CaseLabel(order, label.name, True)
                assert apply_chain(moved, chain).w == sd.w


def test_classification_is_class_function():
    rng = random.Random(1234)
    entry = catalog(4).lookup("n4-case3c")
    labels = set()
    for _ in range(8):
        b = random_transform(rng, 4)
        labels.add(classify(apply(entry, b))[0])
    assert labels == {CaseLabel(4, "n4-case3c", False)}


def test_equivalence_check_trivial():
    t = leibniz(3)
    verdict = equivalence_check(t, t)
    assert verdict.kind == "equivalent"
    assert verdict.witness == ()


def test_equivalence_check_distinct_by_rank():
    v = equivalence_check(catalog(3).lookup("n3-case2"), catalog(3).lookup("n3-case4"))
    assert v.kind == "distinct"
    assert "slice_ranks" in v.reason


def test_equivalence_check_case1b_vs_case3d():
    v = equivalence_check(catalog(4).lookup("n4-case1b"), catalog(4).lookup("n4-case3d"))
    assert v.kind == "distinct"
    assert "slice_ranks" in v.reason


def test_equivalence_check_witness_replay():
    rng = random.Random(5)
    entry = catalog(3).lookup("n3-case4")
    a = apply(entry, random_transform(rng, 3))
    b = apply(entry, random_transform(rng, 3))
    v = equivalence_check(a, b)
    assert v.kind == "equivalent"
    assert apply_chain(a, list(v.witness)).w == b.w


def test_qi_obstruction_is_reported():
    # leading case2 with tail diag(1, 2): the ratio 2 is not a square in Q(i)
    w3 = M([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    w4 = ExactMatrix.diagonal([1, 2, 0, 0])
    t = from_lower_slices([None, None, w3, w4], 4)
    with pytest.raises(ClassificationError):
        classify(t)


def test_catalog_entry_semidirect():
    lab = CaseLabel(2, "n2-case2", True)
    assert catalog_entry(lab).w == append_semisimple(catalog(2).lookup("n2-case2")).w


def test_triangularize_crmhd_family_postcondition():
    # the CRMHD slice matrices are already lower-triangular; any witness
    # satisfying the postcondition is acceptable
    from liepoisson.linalg import simultaneous_triangularize

    fam = crmhd(1).slices_upper()
    bc = simultaneous_triangularize(fam)
    for a in fam:
        assert (bc.m_inv @ a @ bc.matrix).is_lower_triangular()


def test_append_semisimple_case2_equivalent_to_crmhd():
    sd = append_semisimple(catalog(3).lookup("n3-case2"))
    verdict = equivalence_check(sd, crmhd(1))
    assert verdict.kind == "equivalent"
    assert apply_chain(sd, list(verdict.witness)).w == crmhd(1).w


def test_equivalence_check_unknown_above_order_four():
    verdict = equivalence_check(leibniz(5), leibniz(5))
    assert verdict.kind == "equivalent"  # bit-equal short-circuits
    verdict = equivalence_check(leibniz(5), abelian(5))
    assert verdict.kind == "unknown"


def test_catalog_case4b_tail_pattern():
    t = catalog(4).lookup("n4-case4b")
    assert t.slice_lower(3) == M([
        [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]])
    assert t.slice_lower(1) == M([
        [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])


def test_classify_bare_base_bracket_clear_error():
    from liepoisson.extension import pure_semidirect

    with pytest.raises(ClassificationError, match="no solvable part"):
        classify(pure_semidirect(0))
