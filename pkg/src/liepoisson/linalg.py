"""Exact dense linear algebra over Q(i).

Everything here is computed without rounding: row reduction, null spaces,
determinants, the Moore-Penrose pseudoinverse (via rank factorization, so it
is exact for any rank), characteristic polynomials (Faddeev-LeVerrier), and
eigenvalue search restricted to Q(i) by Gaussian-integer divisor enumeration.

Two higher operations act on *families* of commuting matrices:

* :func:`simultaneous_triangularize` returns an invertible M such that
  M^-1 A M is lower-triangular for every member, built by recursive common-
  eigenvector extraction (commuting matrices always share an eigenvector when
  their characteristic polynomials split over the field).
* :func:`simultaneous_block_split` refines this to the joint generalized
  eigenspaces, giving a simultaneous block-diagonal form with one block per
  joint eigenvalue tuple.

Both return a :class:`BasisChange` witness so callers can replay and audit
the transformation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .scalars import (
    GaussianRational,
    ONE,
    UNITS,
    ZERO,
    gaussian_divisors,
    gr,
    parse_scalar,
)


class LinalgError(Exception):
    pass


class SplitFailure(LinalgError):
    """A characteristic polynomial has a root outside Q(i)."""

    def __init__(self, residual: Sequence[GaussianRational]):
        self.residual = list(residual)
        deg = len(self.residual) - 1
        super().__init__(
            f"characteristic polynomial has an irreducible factor of degree {deg} over Q(i)"
        )


class NotCommuting(LinalgError):
    """A matrix family fails pairwise commutation."""

    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(f"matrices {i} and {j} do not commute")


def _as_scalar(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot interpret {x!r} as a Q(i) scalar")


class ExactMatrix:
    """Dense matrix with GaussianRational entries, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(_as_scalar(x) for x in entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "ExactMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return ExactMatrix(r, c, [x for row in rows for x in row])

    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        return ExactMatrix(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    @staticmethod
    def zeros(rows: int, cols: int) -> "ExactMatrix":
        return ExactMatrix(rows, cols, [ZERO] * (rows * cols))

    @staticmethod
    def diagonal(values: Sequence) -> "ExactMatrix":
        vals = [_as_scalar(v) for v in values]
        n = len(vals)
        return ExactMatrix(n, n, [vals[i] if i == j else ZERO for i in range(n) for j in range(n)])

    @staticmethod
    def column(values: Sequence) -> "ExactMatrix":
        vals = list(values)
        return ExactMatrix(len(vals), 1, vals)

    # -- element access ---------------------------------------------------

    def __getitem__(self, ij: Tuple[int, int]) -> GaussianRational:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[GaussianRational, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> Tuple[GaussianRational, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[GaussianRational]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def with_entry(self, i: int, j: int, value) -> "ExactMatrix":
        e = list(self.entries)
        e[i * self.cols + j] = _as_scalar(value)
        return ExactMatrix(self.rows, self.cols, e)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix(
            len(row_idx),
            len(col_idx),
            [self[i, j] for i in row_idx for j in col_idx],
        )

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_shape(other)
        return ExactMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_shape(other)
        return ExactMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "ExactMatrix":
        c = _as_scalar(c)
        return ExactMatrix(self.rows, self.cols, [c * a for a in self.entries])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                acc = ZERO
                for k in range(self.cols):
                    a = ri[k]
                    if a:
                        acc = acc + a * other.entries[k * other.cols + j]
                out.append(acc)
        return ExactMatrix(self.rows, other.cols, out)

    def __pow__(self, k: int) -> "ExactMatrix":
        if self.rows != self.cols:
            raise ValueError("matrix power needs a square matrix")
        out = ExactMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def conjugate_transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            self.cols, self.rows,
            [self[i, j].conjugate() for j in range(self.cols) for i in range(self.rows)],
        )

    def trace(self) -> GaussianRational:
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), ZERO)

    # -- predicates -----------------------------------------------------------

    def _same_shape(self, other: "ExactMatrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def is_zero(self) -> bool:
        return all(not a for a in self.entries)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == ExactMatrix.identity(self.rows)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def is_hermitian(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i].conjugate() for i in range(self.rows) for j in range(i + 1)
        )

    def is_lower_triangular(self) -> bool:
        return all(
            not self[i, j] for i in range(self.rows) for j in range(i + 1, self.cols)
        )

    def diagonal_values(self) -> List[GaussianRational]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def __str__(self) -> str:
        body = [[str(x) for x in self.row(i)] for i in range(self.rows)]
        width = max((len(s) for row in body for s in row), default=1)
        return "\n".join("[" + "  ".join(s.rjust(width) for s in row) + "]" for row in body)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Row reduction and everything built on it
# ---------------------------------------------------------------------------

def rref(a: ExactMatrix) -> Tuple[ExactMatrix, List[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = a.to_rows()
    rows, cols = a.rows, a.cols
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = ONE / m[r][c]
        m[r] = [inv * x for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return ExactMatrix.from_rows(m) if rows else a, pivots


def rank(a: ExactMatrix) -> int:
    return len(rref(a)[1])


def null_space(a: ExactMatrix) -> List[ExactMatrix]:
    """Basis of the right kernel of ``a`` as column vectors.

    The free variable corresponding to each returned vector is set to one and
    the pivots solved by back-substitution, so the count is always
    cols - rank(a) and the vectors are linearly independent by construction.
    """
    r, pivots = rref(a)
    free = [c for c in range(a.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * a.cols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -r[i, f]
        basis.append(ExactMatrix.column(v))
    return basis


def solve(a: ExactMatrix, b: ExactMatrix) -> Optional[ExactMatrix]:
    """One exact solution X of a @ X = b, or None when inconsistent."""
    if a.rows != b.rows:
        raise ValueError("incompatible shapes")
    aug = ExactMatrix(a.rows, a.cols + b.cols, [
        x for i in range(a.rows) for x in (list(a.row(i)) + list(b.row(i)))
    ])
    r, pivots = rref(aug)
    if any(p >= a.cols for p in pivots):
        return None
    out = [[ZERO] * b.cols for _ in range(a.cols)]
    for i, p in enumerate(pivots):
        for j in range(b.cols):
            out[p][j] = r[i, a.cols + j]
    return ExactMatrix.from_rows(out) if a.cols else ExactMatrix.zeros(0, b.cols)


def inverse(a: ExactMatrix) -> ExactMatrix:
    if a.rows != a.cols:
        raise ValueError("only square matrices are invertible")
    x = solve(a, ExactMatrix.identity(a.rows))
    if x is None or rank(a) != a.rows:
        raise LinalgError("matrix is singular")
    return x


def determinant(a: ExactMatrix) -> GaussianRational:
    """Determinant by fraction-free-ish Gaussian elimination (exact anyway)."""
    if a.rows != a.cols:
        raise ValueError("determinant needs a square matrix")
    m = a.to_rows()
    n = a.rows
    det = ONE
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if m[i][c]), None)
        if pivot_row is None:
            return ZERO
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            det = -det
        det = det * m[c][c]
        inv = ONE / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def hstack(mats: Sequence[ExactMatrix]) -> ExactMatrix:
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ValueError("row count mismatch")
    out = []
    for i in range(rows):
        for m in mats:
            out.extend(m.row(i))
    return ExactMatrix(rows, sum(m.cols for m in mats), out)


def pseudoinverse(a: ExactMatrix) -> ExactMatrix:
    """Exact Moore-Penrose pseudoinverse via rank factorization.

    Writing A = B C with B the pivot columns of A and C the nonzero rows of
    rref(A), the pseudoinverse is C* (C C*)^-1 (B* B)^-1 B*, with * the
    conjugate transpose so complex entries are handled.  Satisfies all four
    Moore-Penrose identities exactly, for any rank.
    """
    r, pivots = rref(a)
    k = len(pivots)
    if k == 0:
        return ExactMatrix.zeros(a.cols, a.rows)
    b = a.submatrix(range(a.rows), pivots)
    c = r.submatrix(range(k), range(a.cols))
    ch = c.conjugate_transpose()
    bh = b.conjugate_transpose()
    return ch @ inverse(c @ ch) @ inverse(bh @ b) @ bh


# ---------------------------------------------------------------------------
# Characteristic polynomial and Q(i) eigenvalues
# ---------------------------------------------------------------------------

def characteristic_polynomial(a: ExactMatrix) -> List[GaussianRational]:
    """Coefficients [c0, c1, ..., 1] of det(xI - A), ascending order.

    Uses the Faddeev-LeVerrier recursion, which needs only exact matrix
    products and divisions by integers.
    """
    if a.rows != a.cols:
        raise ValueError("characteristic polynomial needs a square matrix")
    n = a.rows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    m = ExactMatrix.identity(n)
    c = ONE
    for k in range(1, n + 1):
        m = a @ m if k == 1 else a @ (m + ExactMatrix.identity(n).scale(c))
        c = -(m.trace() / gr(k))
        coeffs[n - k] = c
    return coeffs


def _poly_eval(coeffs: Sequence[GaussianRational], x: GaussianRational) -> GaussianRational:
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_deflate(coeffs: List[GaussianRational], root: GaussianRational) -> Optional[List[GaussianRational]]:
    """Divide by (x - root) by synthetic division; None if not a root."""
    q = []
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * root + c
        q.append(acc)
    if q[-1]:
        return None
    return list(reversed(q[:-1]))


def roots_in_gaussian_rationals(
    coeffs: Sequence[GaussianRational],
) -> Tuple[List[Tuple[GaussianRational, int]], List[GaussianRational]]:
    """All Q(i) roots with multiplicity, plus the unfactored residual.

    Candidate roots u/v are enumerated from Gaussian-integer divisors of the
    constant and leading coefficients after clearing denominators (the
    rational-root theorem over Z[i]), times units.
    """
    coeffs = list(coeffs)
    while len(coeffs) > 1 and not coeffs[-1]:
        coeffs.pop()
    roots: List[Tuple[GaussianRational, int]] = []
    # factor out x^k
    zmult = 0
    while len(coeffs) > 1 and not coeffs[0]:
        coeffs.pop(0)
        zmult += 1
    if zmult:
        roots.append((ZERO, zmult))
    if len(coeffs) <= 1:
        return roots, coeffs
    # clear denominators to land in Z[i]
    denom = 1
    for c in coeffs:
        denom = denom * c.re.denominator // _gcd(denom, c.re.denominator)
        denom = denom * c.im.denominator // _gcd(denom, c.im.denominator)
    zc = [c * gr(denom) for c in coeffs]
    candidates = []
    seen = set()
    for u in gaussian_divisors(zc[0]):
        for v in gaussian_divisors(zc[-1]):
            base = u / v
            for unit in UNITS:
                cand = base * unit
                if cand not in seen:
                    seen.add(cand)
                    candidates.append(cand)
    candidates.sort(key=lambda z: (z.norm(), z.sort_key()))
    work = coeffs
    for cand in candidates:
        mult = 0
        while len(work) > 1:
            d = _poly_deflate(work, cand)
            if d is None:
                break
            work = d
            mult += 1
        if mult:
            roots.append((cand, mult))
        if len(work) <= 1:
            break
    roots.sort(key=lambda rm: rm[0].sort_key())
    return roots, work


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def eigenvalues_gaussian(a: ExactMatrix) -> List[Tuple[GaussianRational, int]]:
    """Eigenvalues of ``a`` in Q(i) with algebraic multiplicity.

    Raises :class:`SplitFailure` when the characteristic polynomial has a
    root outside Q(i); the exception carries the unfactored residual.
    """
    roots, residual = roots_in_gaussian_rationals(characteristic_polynomial(a))
    if len(residual) > 1:
        raise SplitFailure(residual)
    return roots


# ---------------------------------------------------------------------------
# BasisChange
# ---------------------------------------------------------------------------

class BasisChange:
    """An invertible coordinate change, with a free trailing scale factor.

    The effective matrix is ``m`` with its last column multiplied by
    ``scale`` (the block form diag(m, c) used when reducing a terminal
    cocycle).  The inverse of the effective matrix is cached.
    """

    __slots__ = ("m", "scale", "m_inv")

    def __init__(self, m: ExactMatrix, scale: GaussianRational = ONE):
        scale = _as_scalar(scale)
        if m.rows != m.cols:
            raise ValueError("basis change must be square")
        if not scale:
            raise ValueError("scale must be nonzero")
        eff = m if scale.is_one() else _scale_last_column(m, scale)
        inv = solve(eff, ExactMatrix.identity(m.rows))
        if inv is None or rank(eff) != eff.rows:
            raise LinalgError("basis change matrix is singular")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "m_inv", inv)

    def __setattr__(self, name, value):
        raise AttributeError("BasisChange is immutable")

    @property
    def n(self) -> int:
        return self.m.rows

    @property
    def matrix(self) -> ExactMatrix:
        """The effective matrix (scale folded into the last column)."""
        return self.m if self.scale.is_one() else _scale_last_column(self.m, self.scale)

    @staticmethod
    def identity(n: int) -> "BasisChange":
        return BasisChange(ExactMatrix.identity(n))

    def inverse(self) -> "BasisChange":
        return BasisChange(self.m_inv)

    def then(self, later: "BasisChange") -> "BasisChange":
        """The single change equivalent to applying self, then ``later``."""
        return BasisChange(self.matrix @ later.matrix)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BasisChange):
            return NotImplemented
        return self.matrix == other.matrix

    def __repr__(self):
        return f"BasisChange(\n{self.matrix}\n)"

    def to_json(self) -> dict:
        return {
            "m": [[str(x) for x in self.m.row(i)] for i in range(self.m.rows)],
            "scale": str(self.scale),
        }

    @staticmethod
    def from_json(doc: dict) -> "BasisChange":
        m = ExactMatrix.from_rows([[parse_scalar(x) for x in row] for row in doc["m"]])
        return BasisChange(m, parse_scalar(doc.get("scale", "1")))


def _scale_last_column(m: ExactMatrix, c: GaussianRational) -> ExactMatrix:
    e = list(m.entries)
    j = m.cols - 1
    for i in range(m.rows):
        e[i * m.cols + j] = e[i * m.cols + j] * c
    return ExactMatrix(m.rows, m.cols, e)


# ---------------------------------------------------------------------------
# Simultaneous triangularization / block splitting of commuting families
# ---------------------------------------------------------------------------

def _check_family(family: Sequence[ExactMatrix]) -> int:
    if not family:
        raise ValueError("empty family")
    n = family[0].rows
    for a in family:
        if a.rows != a.cols or a.rows != n:
            raise ValueError("family matrices must be square and same size")
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            if family[i] @ family[j] != family[j] @ family[i]:
                raise NotCommuting(i, j)
    return n


def _restriction(v: ExactMatrix, a: ExactMatrix) -> ExactMatrix:
    """R with A V = V R, for V spanning an A-invariant space (full col rank)."""
    r = solve(v, a @ v)
    if r is None:
        raise LinalgError("subspace is not invariant")
    return r


def _common_eigenvector(family: Sequence[ExactMatrix], n: int) -> ExactMatrix:
    """One simultaneous eigenvector of a commuting family (column vector)."""
    v = ExactMatrix.identity(n)
    for a in family:
        r = _restriction(v, a)
        eigs = eigenvalues_gaussian(r)
        lam = eigs[0][0]
        kern = null_space(r - ExactMatrix.identity(r.rows).scale(lam))
        v = v @ hstack(kern)
    vec = list(v.col(0))
    lead = next(x for x in vec if x)
    return ExactMatrix.column([x / lead for x in vec])


def _complete_basis(vectors: List[ExactMatrix], n: int) -> ExactMatrix:
    """Extend the given independent columns to a basis using standard vectors.

    The given vectors are placed *last*; this makes the span of the earlier
    standard vectors a complement, which is what the lower-triangular
    recursion wants.
    """
    cols: List[ExactMatrix] = []
    for j in range(n):
        e = ExactMatrix.column([ONE if i == j else ZERO for i in range(n)])
        cand = hstack(cols + [e] + vectors) if cols or vectors else e
        if rank(cand) == len(cols) + 1 + len(vectors):
            cols.append(e)
        if len(cols) + len(vectors) == n:
            break
    return hstack(cols + vectors)


def simultaneous_triangularize(family: Sequence[ExactMatrix]) -> BasisChange:
    """Basis change M with M^-1 A M lower-triangular for every A in the family.

    Recursive common-eigenvector extraction: a shared eigenvector is placed as
    the last basis vector, the family is projected onto the complement, and
    the process repeats on the quotient.
    """
    n = _check_family(family)
    m = _triangularize_rec(list(family), n)
    bc = BasisChange(m)
    for a in family:
        if not (bc.m_inv @ a @ m).is_lower_triangular():
            raise LinalgError("internal error: triangularization postcondition failed")
    return bc


def _triangularize_rec(family: List[ExactMatrix], n: int) -> ExactMatrix:
    if n == 0:
        return ExactMatrix.identity(0)
    if n == 1:
        return ExactMatrix.identity(1)
    v = _common_eigenvector(family, n)
    p = _complete_basis([v], n)
    p_inv = inverse(p)
    reduced = []
    for a in family:
        b = p_inv @ a @ p
        reduced.append(b.submatrix(range(n - 1), range(n - 1)))
    q = _triangularize_rec(reduced, n - 1)
    q_full = ExactMatrix.from_rows(
        [list(q.row(i)) + [ZERO] for i in range(n - 1)] + [[ZERO] * (n - 1) + [ONE]]
    )
    return p @ q_full


def simultaneous_block_split(
    family: Sequence[ExactMatrix],
) -> Tuple[BasisChange, List[Tuple[int, int]]]:
    """Joint generalized eigenspace decomposition of a commuting family.

    Returns (M, ranges) with every M^-1 A M block-diagonal on the given
    contiguous index ranges; each block carries a single (degenerate)
    eigenvalue of every family member.  Blocks are ordered by size
    (descending) then by their eigenvalue tuples.
    """
    n = _check_family(family)
    subspaces: List[Tuple[ExactMatrix, tuple]] = [(ExactMatrix.identity(n), ())]
    for a in family:
        refined: List[Tuple[ExactMatrix, tuple]] = []
        for v, evs in subspaces:
            r = _restriction(v, a)
            k = r.rows
            for lam, _mult in eigenvalues_gaussian(r):
                gen = (r - ExactMatrix.identity(k).scale(lam)) ** k
                kern = null_space(gen)
                if kern:
                    refined.append((v @ hstack(kern), evs + (lam,)))
        subspaces = refined
    subspaces.sort(key=lambda se: (-se[0].cols, tuple(x.sort_key() for x in se[1])))
    m = hstack([v for v, _ in subspaces])
    bc = BasisChange(m)
    ranges: List[Tuple[int, int]] = []
    start = 0
    for v, _ in subspaces:
        ranges.append((start, start + v.cols))
        start += v.cols
    for a in family:
        b = bc.m_inv @ a @ m
        for (s1, e1) in ranges:
            for i in range(s1, e1):
                for j in range(n):
                    if not (s1 <= j < e1) and b[i, j]:
                        raise LinalgError("internal error: block split postcondition failed")
    return bc, ranges
