from fractions import Fraction

import pytest

from liepoisson.casimir import (
    CasimirFamily,
    CasimirTerm,
    FormalFunction,
    SynthesisObstruction,
    build_coextension,
    casimir_condition_check,
    families_equal,
    family_sets_equal,
    format_family,
    leibniz_casimirs_closed_form,
    quadratic_casimir_basis,
    quadratic_family,
    synthesize_casimirs,
)
from liepoisson.classify import catalog, classify
from liepoisson.extension import (
    abelian,
    append_semisimple,
    crmhd,
    direct_sum,
    from_lower_slices,
    leibniz,
)
from liepoisson.linalg import ExactMatrix, hstack, rank
from liepoisson.polynomials import Poly
from liepoisson.scalars import ONE, ZERO, gr
from liepoisson.tables import (
    crmhd_families,
    leibniz_table_nu1,
    semidirect_extra_table,
    solvable_table,
)
from liepoisson.transform import apply_chain

M = ExactMatrix.from_rows


def unit(n, i):
    return tuple(ONE if m == i else ZERO for m in range(n))


# -- condition checker --------------------------------------------------------

def test_crmhd_family_passes():
    t = crmhd(1)
    for fam in crmhd_families(1):
        assert casimir_condition_check(t, fam)


def test_wrong_sign_crmhd_family_fails():
    t = crmhd(1)
    f = FormalFunction("f", (unit(4, 3),))
    bad = CasimirFamily((
        CasimirTerm(Poly(4, {(1, 0, 0, 0): ONE}), f, (0,)),
        CasimirTerm(Poly(4, {(0, 1, 1, 0): ONE}), f, (1,)),  # sign flipped
    ), 4, True)
    report = casimir_condition_check(t, bad)
    assert not report
    assert report.failure is not None
    lam, sig, nu = report.failure
    assert report.residual  # nonzero residual polynomial at the cited triple


def test_local_coordinate_family_passes_everywhere():
    # the last coordinate of a solvable tensor is locally conserved
    for order in (2, 3, 4):
        for label, t in catalog(order).entries:
            f = FormalFunction("f", (unit(t.n, t.n - 1),))
            fam = CasimirFamily((CasimirTerm(Poly.constant(t.n, 1), f, (0,)),), t.n)
            assert casimir_condition_check(t, fam)


# -- coextension ---------------------------------------------------------------

def test_crmhd_coextension_trivial():
    for beta in (1, Fraction(5, 2)):
        co = build_coextension(crmhd(beta))
        b = gr(beta)
        assert co.wn == ExactMatrix.from_rows([[ZERO, -b], [-b, ZERO]])
        assert co.wn_pinv == ExactMatrix.from_rows([[ZERO, -1 / b], [-1 / b, ZERO]])
        assert all(not c for plane in co.cow for row in plane for c in row)
        assert co.nonsingular and co.solvable_ok and co.coext_ok


def test_case3c_coextension():
    co = build_coextension(catalog(4).lookup("n4-case3c"))
    assert co.wn == M([[0, 0, 1], [0, 0, 0], [1, 0, 0]])
    assert co.wn_pinv == co.wn
    assert co.projector == ExactMatrix.diagonal([1, 0, 1])
    assert [[str(x) for x in row] for row in co.cow[0]] == [
        ["0", "0", "0"], ["0", "0", "1"], ["0", "1", "0"]]
    assert all(not c for plane in co.cow[1:] for row in plane for c in row)
    assert co.solvable_ok and co.coext_ok and not co.nonsingular


def test_leibniz_coextension_closed_form():
    for n in (3, 5, 7):
        co = build_coextension(leibniz(n))
        k = n - 1
        for mu in range(k):
            for nu in range(k):
                want = ONE if (mu + 1) + (nu + 1) == n else ZERO
                assert co.wn_pinv[mu, nu] == want
        for mu in range(k):
            for tau in range(k):
                for sig in range(k):
                    want = ONE if (mu + 1) + n == (tau + 1) + (sig + 1) else ZERO
                    assert co.cow[mu][tau][sig] == want


def test_coextension_symmetry_invariant():
    for order in (2, 3, 4):
        for label, t in catalog(order).entries:
            co = build_coextension(t)
            k = co.wn.rows
            for mu in range(k):
                for tau in range(k):
                    for sig in range(k):
                        assert co.cow[mu][tau][sig] == co.cow[mu][sig][tau]


# -- synthesis ------------------------------------------------------------------

def test_crmhd_synthesis_matches_display():
    for beta in (1, Fraction(5, 2)):
        fams = synthesize_casimirs(crmhd(beta))
        assert family_sets_equal(fams, crmhd_families(beta))


def test_case3c_families():
    fams = synthesize_casimirs(catalog(4).lookup("n4-case3c"))
    assert family_sets_equal(fams, solvable_table()["n4-case3c"])


def test_all_solvable_tables_reproduced():
    table = solvable_table()
    for order in (1, 2, 3, 4):
        for label, t in catalog(order).entries:
            fams = synthesize_casimirs(t)
            assert family_sets_equal(fams, table[label.name]), label.name
            for fam in fams:
                assert casimir_condition_check(t, fam)
            for fam in table[label.name]:
                assert casimir_condition_check(t, fam)


def test_semidirect_extra_families():
    extras = semidirect_extra_table()
    for order in (1, 2, 3, 4):
        for label, t in catalog(order).entries:
            sd = append_semisimple(t)
            fams = synthesize_casimirs(sd)
            with_zero = [f for f in fams if any(term.poly.uses_variable(0) for term in f.terms)]
            if label.name in extras:
                assert len(with_zero) == 1
                assert families_equal(with_zero[0], extras[label.name]), label.name
            else:
                assert not with_zero, label.name


def test_semidirect_gate_follows_tail_determinant():
    for order in (2, 3, 4):
        for label, t in catalog(order).entries:
            sd = append_semisimple(t)
            co = build_coextension(sd)
            tail = co.wn
            assert co.nonsingular == (rank(tail) == tail.rows)


def test_leibniz_closed_form_table():
    table = leibniz_table_nu1()
    for n in range(1, 6):
        assert families_equal(leibniz_casimirs_closed_form(n, 1), table[n]), n


def test_leibniz_closed_form_depends_on_trailing_vars():
    fam = leibniz_casimirs_closed_form(5, 2)
    used = set()
    for term in fam.terms:
        for e in term.poly.terms:
            used.update(i for i, k in enumerate(e) if k)
    assert used <= set(range(1, 5))  # storage slots carrying labels 2..5


def test_oracle_equivalence_recursion_vs_closed_form():
    for n in range(2, 9):
        fams = synthesize_casimirs(leibniz(n))
        closed = [leibniz_casimirs_closed_form(n, nu) for nu in range(1, n + 1)]
        assert family_sets_equal(fams, closed), n


def test_nonsingular_family_count_equals_order():
    for n in range(2, 7):
        assert len(synthesize_casimirs(leibniz(n))) == n


def test_direct_sum_families_merge_null_arguments():
    t = direct_sum(leibniz(2), leibniz(2))
    fams = synthesize_casimirs(t)
    expected = solvable_table()["n4-case3b"]
    assert family_sets_equal(fams, expected)


def test_synthesis_obstruction_on_unnormalized_tensor():
    # W_(2) = e11 and W_(3) = e11: valid lower-triangular, but the cocycle
    # contains a removable coboundary, and the raw coextension fails
    w2 = M([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    w3 = M([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    t = from_lower_slices([None, w2, w3], 3)
    with pytest.raises(SynthesisObstruction):
        synthesize_casimirs(t)
    # after normalization through the classifier the same algebra works
    label, chain = classify(t)
    normal = apply_chain(t, chain)
    fams = synthesize_casimirs(normal)
    assert family_sets_equal(fams, solvable_table()[label.name])


# -- quadratic Casimirs -----------------------------------------------------------

def span_contains(basis, q):
    if not basis:
        return q.is_zero()
    cols = [ExactMatrix.column(list(m.entries)) for m in basis]
    target = ExactMatrix.column(list(q.entries))
    return rank(hstack(cols)) == rank(hstack(cols + [target]))


def test_quadratic_basis_heavy_top():
    t = leibniz(1, semidirect=True)
    basis = quadratic_casimir_basis(t)
    assert len(basis) == 2
    assert span_contains(basis, M([[0, 1], [1, 0]]))
    assert span_contains(basis, M([[0, 0], [0, 1]]))
    assert not span_contains(basis, M([[1, 0], [0, 0]]))


def test_quadratic_basis_abelian_full():
    for n in (2, 3, 4):
        basis = quadratic_casimir_basis(abelian(n))
        assert len(basis) == n * (n + 1) // 2


def test_quadratic_basis_crmhd_contains_cross_helicity():
    basis = quadratic_casimir_basis(crmhd(1))
    q = M([[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]])
    assert span_contains(basis, q)


def test_quadratic_families_pass_condition():
    for t in (crmhd(1), leibniz(3), leibniz(2, semidirect=True), catalog(4).lookup("n4-case3c")):
        for q in quadratic_casimir_basis(t):
            assert casimir_condition_check(t, quadratic_family(t, q))


# -- formatting / serialization -----------------------------------------------

def test_format_family_table_notation():
    fam = leibniz_casimirs_closed_form(3, 1)
    assert format_family(fam) == "ξ1 f(ξ3) + 1/2 (ξ2)^2 f'(ξ3)"
    bare = solvable_table()["n3-case1"][0]
    assert format_family(bare) == "f(ξ1, ξ2, ξ3)"


def test_family_json_round_trip():
    for fam in synthesize_casimirs(crmhd(1)):
        doc = fam.to_json()
        again = CasimirFamily.from_json(doc)
        assert families_equal(fam, again)
        assert again.semidirect == fam.semidirect


def test_direct_sum_additivity_mixed_orders():
    """Families of a sum restrict to the blocks' own families."""
    from liepoisson.polynomials import Poly

    t = direct_sum(leibniz(2), leibniz(3))
    fams = synthesize_casimirs(t)
    # block supports: {0,1} and {2,3,4}; the two null directions merge
    supports = []
    for fam in fams:
        used = set()
        for term in fam.terms:
            for e in term.poly.terms:
                used.update(i for i, k in enumerate(e) if k)
            if term.func is not None:
                for u in term.func.args:
                    used.update(i for i, c in enumerate(u) if c)
        supports.append(frozenset(used))
    assert frozenset({0, 1}) in supports          # xi1 f(xi2) block family
    assert frozenset({2, 3, 4}) in supports       # order-3 Leibniz family
    assert frozenset({1, 4}) in supports          # merged null arguments
    # per-block restriction matches each block's own leading family
    lead2 = leibniz_casimirs_closed_form(2, 1)
    lead3 = leibniz_casimirs_closed_form(3, 1)
    blk2 = [f for f, s in zip(fams, supports) if s == frozenset({0, 1})][0]
    assert _restrict(blk2, range(0, 2), 2) is not None
    assert families_equal(_restrict(blk2, range(0, 2), 2), lead2)
    blk3 = [f for f, s in zip(fams, supports) if s == frozenset({2, 3, 4})][0]
    assert families_equal(_restrict(blk3, range(2, 5), 3), lead3)


def _restrict(fam, slots, n):
    """Project a family supported on the given slots onto a smaller tensor."""
    from liepoisson.casimir import CasimirFamily, CasimirTerm, FormalFunction
    from liepoisson.polynomials import Poly

    slots = list(slots)
    terms = []
    for term in fam.terms:
        poly = Poly(n, {tuple(e[s] for s in slots): c for e, c in term.poly.terms.items()})
        func = None
        if term.func is not None:
            args = tuple(tuple(u[s] for s in slots) for u in term.func.args)
            func = FormalFunction(term.func.label, args)
        terms.append(CasimirTerm(poly, func, term.deriv))
    return CasimirFamily(tuple(terms), n, False)


def _instantiate(fam, power):
    """Replace the arbitrary function by (u.xi)^power, as a plain Poly."""
    from math import factorial

    n = fam.n
    out = Poly.zero(n)
    for term in fam.terms:
        if term.func is None:
            out = out + term.poly
            continue
        assert len(term.func.args) == 1
        u = term.func.args[0]
        arg = Poly.zero(n)
        for idx, c in enumerate(u):
            if c:
                arg = arg + Poly.variable(n, idx).scale(c)
        k = term.deriv[0]
        if k > power:
            continue
        coeff = factorial(power) // factorial(power - k)
        deriv_poly = Poly.constant(n, coeff)
        for _ in range(power - k):
            deriv_poly = deriv_poly * arg
        out = out + term.poly * deriv_poly
    return out


def _direct_condition_check(t, density):
    """The symmetry condition evaluated with plain polynomial arithmetic."""
    n = t.n
    hess = [[density.diff(mu).diff(sig) for sig in range(n)] for mu in range(n)]
    for nu in range(n):
        for lam in range(n):
            for sig in range(lam):
                lhs = Poly.zero(n)
                rhs = Poly.zero(n)
                for mu in range(n):
                    w1 = t.entry(lam, mu, nu)
                    if w1:
                        lhs = lhs + hess[mu][sig].scale(w1)
                    w2 = t.entry(sig, mu, nu)
                    if w2:
                        rhs = rhs + hess[mu][lam].scale(w2)
                if lhs != rhs:
                    return False
    return True


def test_checker_agrees_with_monomial_instantiation():
    """Independent oracle for the formal-derivative checker itself."""
    t = crmhd(1)
    good = crmhd_families(1)[0]
    bad_terms = list(good.terms)
    bad = CasimirFamily(
        (bad_terms[0],
         CasimirTerm(bad_terms[1].poly.scale(gr(-1)), bad_terms[1].func, bad_terms[1].deriv)),
        4, True)
    for power in (2, 3, 5):
        assert _direct_condition_check(t, _instantiate(good, power))
        assert not _direct_condition_check(t, _instantiate(bad, power))
    assert casimir_condition_check(t, good)
    assert not casimir_condition_check(t, bad)
    # same cross-check on a Leibniz family with second derivatives
    t8 = leibniz(5)
    fam = leibniz_casimirs_closed_form(5, 1)
    for power in (3, 4):
        assert _direct_condition_check(t8, _instantiate(fam, power))
    assert casimir_condition_check(t8, fam)
