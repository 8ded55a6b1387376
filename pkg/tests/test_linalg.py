import random
from fractions import Fraction

import pytest

from liepoisson.linalg import (
    BasisChange,
    ExactMatrix,
    NotCommuting,
    SplitFailure,
    characteristic_polynomial,
    determinant,
    eigenvalues_gaussian,
    hstack,
    inverse,
    null_space,
    pseudoinverse,
    rank,
    rref,
    simultaneous_block_split,
    simultaneous_triangularize,
    solve,
)
from liepoisson.scalars import Fraction as F, I, ONE, ZERO, gr

M = ExactMatrix.from_rows


def random_matrix(rng, rows, cols, span=4, complex_prob=0.3):
    ents = []
    for _ in range(rows * cols):
        re = Fraction(rng.randint(-span, span), rng.randint(1, 3))
        im = Fraction(rng.randint(-span, span), rng.randint(1, 3)) if rng.random() < complex_prob else 0
        ents.append(gr(re, im))
    return ExactMatrix(rows, cols, ents)


def random_rank_deficient(rng, n, r):
    # product of random n x r and r x n has rank <= r
    a = random_matrix(rng, n, r) if r else ExactMatrix.zeros(n, 0)
    b = random_matrix(rng, r, n) if r else ExactMatrix.zeros(0, n)
    return a @ b if r else ExactMatrix.zeros(n, n)


def test_rref_and_rank():
    a = M([[1, 1], [2, 2]])
    r, pivots = rref(a)
    assert pivots == [0]
    assert rank(a) == 1
    assert rank(ExactMatrix.identity(3)) == 3
    assert rank(ExactMatrix.zeros(2, 2)) == 0


def test_null_space_examples():
    # full rank -> empty
    assert null_space(ExactMatrix.identity(2)) == []
    # zero map -> two independent vectors spanning the plane
    basis = null_space(ExactMatrix.zeros(2, 2))
    assert len(basis) == 2
    assert rank(hstack(basis)) == 2
    # hand row-reduction: kernel of [[1,1],[2,2]] is spanned by (1,-1)
    basis = null_space(M([[1, 1], [2, 2]]))
    assert len(basis) == 1
    v = basis[0]
    assert v[0, 0] * gr(-1) == v[1, 0]


def test_null_space_properties_random():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(1, 4)
        r = rng.randint(0, n)
        a = random_rank_deficient(rng, n, r)
        basis = null_space(a)
        assert len(basis) == n - rank(a)
        for v in basis:
            assert (a @ v).is_zero()
        if basis:
            assert rank(hstack(basis)) == len(basis)


def test_solve_and_inverse():
    a = M([[1, 2], [3, 5]])
    x = solve(a, ExactMatrix.identity(2))
    assert a @ x == ExactMatrix.identity(2)
    assert inverse(a) == x
    assert solve(M([[1, 1], [1, 1]]), M([[1], [2]])) is None


def test_determinant():
    assert determinant(M([[1, 2], [3, 4]])) == gr(-2)
    assert determinant(ExactMatrix.zeros(3, 3)) == ZERO
    assert determinant(ExactMatrix.identity(4)) == ONE


# -- pseudoinverse -----------------------------------------------------------

def mp_identities_hold(a, p):
    if (a @ p @ a) != a:
        return False
    if (p @ a @ p) != p:
        return False
    if not (a @ p).is_hermitian():
        return False
    if not (p @ a).is_hermitian():
        return False
    return True


def test_pseudoinverse_known_values():
    # self-inverse singular example
    a = M([[0, 0, 1], [0, 0, 0], [1, 0, 0]])
    assert pseudoinverse(a) == a
    # 2x2 antidiagonal with parameter beta = 1
    b = M([[0, -1], [-1, 0]])
    assert pseudoinverse(b) == M([[0, -1], [-1, 0]])
    # beta = 5/2: inverse is antidiag(-1/beta)
    beta = F(5, 2)
    c = ExactMatrix.from_rows([[0, gr(-beta)], [gr(-beta), 0]])
    assert pseudoinverse(c) == ExactMatrix.from_rows([[0, gr(-1 / beta)], [gr(-1 / beta), 0]])


def test_pseudoinverse_of_invertible_is_inverse():
    a = M([[1, 2, 0], [0, 1, 4], [1, 0, 1]])
    assert pseudoinverse(a) == inverse(a)


def test_pseudoinverse_property_suite():
    rng = random.Random(42)
    for _ in range(60):
        n = rng.randint(1, 4)
        m_ = rng.randint(1, 4)
        r = rng.randint(0, min(n, m_))
        a = (random_matrix(rng, n, r) @ random_matrix(rng, r, m_)) if r else ExactMatrix.zeros(n, m_)
        p = pseudoinverse(a)
        assert mp_identities_hold(a, p)


# -- characteristic polynomial / eigenvalues ---------------------------------

def test_characteristic_polynomial():
    a = M([[2, 0], [0, 3]])
    # (x-2)(x-3) = x^2 - 5x + 6
    assert characteristic_polynomial(a) == [gr(6), gr(-5), ONE]


def test_eigenvalues_examples():
    assert eigenvalues_gaussian(M([[0, 0], [1, 0]])) == [(ZERO, 2)]
    assert eigenvalues_gaussian(M([[1, 0], [1, 1]])) == [(ONE, 2)]
    # rotation matrix: eigenvalues +-i
    eigs = eigenvalues_gaussian(M([[0, -1], [1, 0]]))
    assert eigs == [(-I, 1), (I, 1)] or eigs == [(I, 1), (-I, 1)]
    assert sorted(e.sort_key() for e, _ in eigs) == [(-I).sort_key(), I.sort_key()]


def test_eigenvalues_triangular_reads_diagonal():
    rng = random.Random(9)
    for _ in range(20):
        n = rng.randint(1, 4)
        a = random_matrix(rng, n, n, complex_prob=0)
        rows = a.to_rows()
        for i in range(n):
            for j in range(i + 1, n):
                rows[i][j] = ZERO
            rows[i][i] = gr(rng.randint(-2, 2))
        t = ExactMatrix.from_rows(rows)
        eigs = dict(eigenvalues_gaussian(t))
        diag = t.diagonal_values()
        for lam, mult in eigs.items():
            assert diag.count(lam) == mult


def test_eigenvalues_split_failure():
    # x^2 - 2 has no Q(i) roots
    with pytest.raises(SplitFailure):
        eigenvalues_gaussian(M([[0, 2], [1, 0]]))


def test_eigenvalues_rational_and_gaussian_mix():
    a = M([[F(1, 2), 0], [1, F(1, 2)]])
    assert eigenvalues_gaussian(a) == [(gr(F(1, 2)), 2)]


# -- simultaneous triangularization / block split -----------------------------

def test_triangularize_jordan_flip():
    fam = [M([[0, 1], [0, 0]])]
    bc = simultaneous_triangularize(fam)
    out = bc.m_inv @ fam[0] @ bc.matrix
    assert out.is_lower_triangular()
    assert not out.is_zero()


def test_triangularize_identity_plus_nilpotent():
    fam = [ExactMatrix.identity(3), M([[0, 0, 0], [1, 0, 0], [0, 1, 0]])]
    bc = simultaneous_triangularize(fam)
    for a in fam:
        assert (bc.m_inv @ a @ bc.matrix).is_lower_triangular()


def test_triangularize_commuting_random_family():
    rng = random.Random(13)
    for _ in range(15):
        n = rng.randint(2, 4)
        base = random_matrix(rng, n, n, span=2, complex_prob=0)
        # polynomials in a common matrix commute; shift keeps eigenvalues rational
        base = base @ base  # may not split -> use a triangular base instead
        rows = base.to_rows()
        for i in range(n):
            for j in range(i + 1, n):
                rows[i][j] = ZERO
        base = ExactMatrix.from_rows(rows)
        fam = [base, base @ base + base.scale(3), ExactMatrix.identity(n) + base.scale(2)]
        bc = simultaneous_triangularize(fam)
        for a in fam:
            assert (bc.m_inv @ a @ bc.matrix).is_lower_triangular()


def test_triangularize_rejects_noncommuting():
    with pytest.raises(NotCommuting):
        simultaneous_triangularize([M([[0, 1], [0, 0]]), M([[0, 0], [1, 0]])])


def test_block_split_examples():
    bc, ranges = simultaneous_block_split([ExactMatrix.diagonal([1, 1, 0])])
    assert [e - s for s, e in ranges] == [2, 1]
    bc, ranges = simultaneous_block_split([ExactMatrix.identity(2)])
    assert ranges == [(0, 2)]
    # second matrix separates what the first leaves degenerate
    bc, ranges = simultaneous_block_split(
        [ExactMatrix.diagonal([2, 3]), ExactMatrix.diagonal([5, 5])]
    )
    assert [e - s for s, e in ranges] == [1, 1]


def test_block_split_block_diagonalizes():
    a = M([[1, 0, 0], [1, 1, 0], [0, 0, 2]])
    b = M([[3, 0, 0], [0, 3, 0], [0, 0, 3]])
    bc, ranges = simultaneous_block_split([a, b])
    out = bc.m_inv @ a @ bc.matrix
    sizes = sorted(e - s for s, e in ranges)
    assert sizes == [1, 2]


def test_basis_change_roundtrip_json():
    b = BasisChange(M([[1, 1], [0, 1]]), scale=gr(2))
    again = BasisChange.from_json(b.to_json())
    assert again == b
    assert b.matrix == M([[1, 2], [0, 2]])
    assert (b.matrix @ b.m_inv).is_identity()
