"""Normal-form classification of extension tensors up to order four.

The pipeline follows the reduction that produces the catalog: triangularize
the commuting slice family, check the tensor is a single degenerate block,
split off the semisimple slot if the leading eigenvalue is nonzero (scaling
it to one and normalizing the first slice to the identity), then reduce the
solvable part stage by stage.  Stage m normalizes slice m given a leading
part already in normal form, by removing coboundaries, rescaling, reducing
terminal cocycles by congruence, and applying the fixed inter-case maps
(some complex).  Every move is an explicit invertible matrix, so classify
returns a replayable witness chain along with the case label; the chain is
replayed and checked against the catalog normal form before returning.

Over Q(i) a few tensors outside the catalog orbits hit a genuine
obstruction: a rescaling would need a square root that Q(i) lacks (the
smallest example needs sqrt(2)).  Those raise :class:`ClassificationError`
rather than silently widening the coefficient field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .extension import (
    ExtensionTensor,
    TensorError,
    abelian,
    append_semisimple,
    from_lower_slices,
    strip_semisimple,
    validate,
)
from .linalg import BasisChange, ExactMatrix, rank
from .scalars import GaussianRational, I, ONE, ZERO, gr, sqrt_gaussian
from .transform import apply, apply_chain, normalize_w0_to_identity

M = ExactMatrix.from_rows


class ClassificationError(TensorError):
    pass


class OrderTooHigh(ClassificationError):
    def __init__(self, order: int):
        self.order = order
        super().__init__(f"no catalog for solvable order {order} > 4")


class NotSingleBlock(ClassificationError):
    """Input splits into blocks with distinct eigenvalues.

    Classification labels a single degenerate block; split such inputs
    first with simultaneous_block_split and classify each block.
    """


@dataclass(frozen=True)
class CaseLabel:
    order: int
    name: str
    semidirect: bool = False

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Catalog:
    order: int
    entries: Tuple[Tuple[CaseLabel, ExtensionTensor], ...]

    def lookup(self, name: str) -> ExtensionTensor:
        for label, t in self.entries:
            if label.name == name:
                return t
        raise KeyError(name)

    def __len__(self):
        return len(self.entries)


def _slice_matrix(n: int, pairs: Dict[Tuple[int, int], int]) -> ExactMatrix:
    rows = [[ZERO] * n for _ in range(n)]
    for (i, j), v in pairs.items():
        rows[i][j] = gr(v)
        rows[j][i] = gr(v)
    return ExactMatrix.from_rows(rows)


def _normal_form(n: int, slices: Dict[int, Dict[Tuple[int, int], int]]) -> ExtensionTensor:
    mats: List[Optional[ExactMatrix]] = [None] * n
    for lam, pairs in slices.items():
        mats[lam] = _slice_matrix(n, pairs)
    return from_lower_slices(mats, n)


_CATALOGS: Dict[int, Catalog] = {}


def catalog(order: int) -> Catalog:
    """The independent solvable normal forms at the given order (<= 4)."""
    if order < 1 or order > 4:
        raise OrderTooHigh(order)
    if order in _CATALOGS:
        return _CATALOGS[order]
    if order == 1:
        entries = [("n1-abelian", abelian(1))]
    elif order == 2:
        entries = [
            ("n2-case1", abelian(2)),
            ("n2-case2", _normal_form(2, {1: {(0, 0): 1}})),
        ]
    elif order == 3:
        entries = [
            ("n3-case1", abelian(3)),
            ("n3-case2", _normal_form(3, {2: {(0, 1): 1}})),
            ("n3-case3", _normal_form(3, {1: {(0, 0): 1}})),
            ("n3-case4", _normal_form(3, {1: {(0, 0): 1}, 2: {(0, 1): 1}})),
        ]
    else:
        entries = [
            ("n4-case1a", abelian(4)),
            ("n4-case1b", _normal_form(4, {3: {(0, 2): 1, (1, 1): 1}})),
            ("n4-case2", _normal_form(4, {2: {(0, 1): 1}})),
            ("n4-case3a", _normal_form(4, {1: {(0, 0): 1}})),
            ("n4-case3b", _normal_form(4, {1: {(0, 0): 1}, 3: {(2, 2): 1}})),
            ("n4-case3c", _normal_form(4, {1: {(0, 0): 1}, 3: {(0, 2): 1}})),
            ("n4-case3d", _normal_form(4, {1: {(0, 0): 1}, 3: {(0, 1): 1, (2, 2): 1}})),
            ("n4-case4a", _normal_form(4, {1: {(0, 0): 1}, 2: {(0, 1): 1}})),
            ("n4-case4b", _normal_form(4, {1: {(0, 0): 1}, 2: {(0, 1): 1}, 3: {(0, 2): 1, (1, 1): 1}})),
        ]
    cat = Catalog(order, tuple((CaseLabel(order, name), t) for name, t in entries))
    _CATALOGS[order] = cat
    return cat


# ---------------------------------------------------------------------------
# Classification pipeline
# ---------------------------------------------------------------------------

def classify(t: ExtensionTensor) -> Tuple[CaseLabel, List[BasisChange]]:
    """Reduce a valid tensor to its catalog normal form.

    Returns the case label and the witness chain; replaying the chain on the
    input reproduces the normal form (for semidirect inputs, the normal form
    with the identity slice appended) bit-exactly, which is verified before
    returning.
    """
    t = validate(t.w, semidirect=t.semidirect)
    original = t
    chain: List[BasisChange] = []
    if not t.is_lower_triangular():
        from .linalg import simultaneous_triangularize

        b = simultaneous_triangularize(t.slices_upper())
        t = apply(t, b, check=False)
        chain.append(b)
    _require_single_block(t)
    ev = t.slice_upper(0).diagonal_values()[0]
    semidirect = bool(ev)
    if semidirect:
        t, b = normalize_w0_to_identity(t)
        if not b.matrix.is_identity():
            chain.append(b)
        solvable = strip_semisimple(t)
        if solvable.n == 0:
            raise ClassificationError(
                "bare base bracket: the semisimple slot has no solvable part to classify"
            )
        sol_normal, sol_chain = _classify_solvable(solvable)
        chain.extend(_embed(b, t.n) for b in sol_chain)
        expected = append_semisimple(sol_normal)
        order = sol_normal.n
    else:
        sol_normal, sol_chain = _classify_solvable(t)
        chain.extend(sol_chain)
        expected = sol_normal
        order = sol_normal.n
    name = _match_catalog(sol_normal)
    label = CaseLabel(order, name, semidirect)
    replay = apply_chain(original, chain, check=False)
    if replay.w != expected.w:
        raise ClassificationError("internal error: witness chain does not reproduce the normal form")
    return label, chain


def _require_single_block(t: ExtensionTensor) -> None:
    for nu in range(t.n):
        diag = t.slice_upper(nu).diagonal_values()
        if any(d != diag[0] for d in diag):
            raise NotSingleBlock(
                "tensor has blocks with distinct eigenvalues; split it first"
            )
    for nu in range(1, t.n):
        if t.slice_upper(nu).diagonal_values()[0]:
            raise NotSingleBlock("slice past the first has a nonzero eigenvalue")


def _match_catalog(normal: ExtensionTensor) -> str:
    for label, entry in catalog(normal.n).entries:
        if entry.w == normal.w:
            return label.name
    raise ClassificationError("internal error: reduced tensor is not a catalog entry")


def _embed(b: BasisChange, n: int) -> BasisChange:
    """Lift a solvable-part basis change to the full semidirect tensor."""
    small = b.matrix
    rows = [[ONE] + [ZERO] * (n - 1)]
    for i in range(small.rows):
        rows.append([ZERO] + list(small.row(i)))
    return BasisChange(ExactMatrix.from_rows(rows))


def _apply_step(t: ExtensionTensor, chain: List[BasisChange], m: ExactMatrix) -> ExtensionTensor:
    b = BasisChange(m)
    chain.append(b)
    return apply(t, b, check=False)


def _perm_columns(n: int, cols: Sequence[int]) -> ExactMatrix:
    """Matrix whose new basis vectors are the old ones listed in ``cols``."""
    return ExactMatrix.from_rows(
        [[ONE if cols[j] == i else ZERO for j in range(n)] for i in range(n)]
    )


def _classify_solvable(t: ExtensionTensor) -> Tuple[ExtensionTensor, List[BasisChange]]:
    n = t.n
    if n > 4:
        raise OrderTooHigh(n)
    if not t.is_solvable():
        raise ClassificationError("internal error: expected a solvable tensor")
    chain: List[BasisChange] = []
    if n < 4:
        for stage in range(2, n + 1):
            t = _stage(t, stage, chain)
        return t, chain
    t = _stage(t, 2, chain)
    if not t.entry(1, 0, 0) and _tail_head_supported(t):
        # both trailing slices are cocycles on the abelian head: treat them
        # as a pencil of binary quadratic forms
        t, finished = _pencil_reduce(t, chain)
        if finished:
            return t, chain
    t = _stage(t, 3, chain)
    t = _stage(t, 4, chain)
    return t, chain


def _tail_head_supported(t: ExtensionTensor) -> bool:
    """Slices 2 and 3 touch only the head indices (0, 1)."""
    for lam in (2, 3):
        s = t.slice_lower(lam)
        for mu in range(4):
            for nu in range(2, 4):
                if s[mu, nu] or s[nu, mu]:
                    return False
    return True


def _head_product(t: ExtensionTensor, x: ExactMatrix, y: ExactMatrix) -> List[GaussianRational]:
    n = t.n
    out = []
    for lam in range(n):
        acc = ZERO
        for mu in range(2):
            for nu in range(2):
                c = t.entry(lam, mu, nu)
                if c:
                    acc = acc + c * x[mu, 0] * y[nu, 0]
        out.append(acc)
    return out


def _rank1_decompose(g: ExactMatrix):
    """lam, w with g = lam * w w^T for a rank-one symmetric 2x2 form."""
    if g[0, 0]:
        return ONE / g[0, 0], ExactMatrix.column([g[0, 0], g[0, 1]])
    if g[1, 1]:
        return ONE / g[1, 1], ExactMatrix.column([g[0, 1], g[1, 1]])
    raise ClassificationError("internal error: form is not rank one")


def _pencil_reduce(
    t: ExtensionTensor, chain: List[BasisChange]
) -> Tuple[ExtensionTensor, bool]:
    """Normalize the head pencil (slice 2, slice 3) of an order-4 tensor.

    Proportional slices are merged into slice 2 and handed back to the
    stagewise path (finished=False).  A genuine two-dimensional pencil is
    resolved by its degenerate locus det(s A + t B): two rational root
    lines produce two inert squares (case 3b), a double root produces a
    square and a cross product (case 3c).  Irrational root lines mean the
    tensor is not in any catalog orbit over Q(i).
    """
    n = t.n
    a = t.slice_lower(2).submatrix(range(2), range(2))
    b = t.slice_lower(3).submatrix(range(2), range(2))
    if a.is_zero() and b.is_zero():
        return t, False
    if a.is_zero():
        t = _apply_step(t, chain, _perm_columns(n, [0, 1, 3, 2]))
        a, b = b, a
    ratio = _proportional(b, a)
    if ratio is not None:
        if ratio:
            t = _apply_step(t, chain, ExactMatrix.identity(n).with_entry(3, 2, ratio))
        return t, False
    det_a, det_b = _det2(a), _det2(b)
    mix = a[0, 0] * b[1, 1] + a[1, 1] * b[0, 0] - gr(2) * a[0, 1] * b[0, 1]
    roots = _pencil_roots(det_a, det_b, mix)
    if roots is None:
        raise ClassificationError(
            "pencil discriminant is not a square in Q(i); tensor is outside the catalog orbits"
        )
    (s1, t1), (s2, t2), double = roots
    g1 = a.scale(s1) + b.scale(t1)
    if double:
        lam1, w1 = _rank1_decompose(g1)
        kern = ExactMatrix.column([-w1[1, 0], w1[0, 0]])
        y0 = next(
            v for v in (ExactMatrix.column([ONE, ZERO]), ExactMatrix.column([ZERO, ONE]))
            if (w1.transpose() @ v)[0, 0]
        )
        f2 = _head_product(t, y0, y0)
        f3 = _head_product(t, y0, kern)
        if all(not x for x in f3) or any(_head_product(t, kern, kern)):
            raise ClassificationError("internal error: double-root pencil structure")
        cols = [
            [y0[0, 0], y0[1, 0], ZERO, ZERO],
            f2,
            [kern[0, 0], kern[1, 0], ZERO, ZERO],
            f3,
        ]
    else:
        g2 = a.scale(s2) + b.scale(t2)
        _, w1 = _rank1_decompose(g1)
        _, w2 = _rank1_decompose(g2)
        wmat = ExactMatrix.from_rows([[w1[0, 0], w1[1, 0]], [w2[0, 0], w2[1, 0]]])
        from .linalg import inverse

        p = inverse(wmat)
        y0 = ExactMatrix.column([p[0, 0], p[1, 0]])
        y1 = ExactMatrix.column([p[0, 1], p[1, 1]])
        f2 = _head_product(t, y0, y0)
        f4 = _head_product(t, y1, y1)
        if any(_head_product(t, y0, y1)):
            raise ClassificationError("internal error: distinct-root pencil structure")
        cols = [
            [y0[0, 0], y0[1, 0], ZERO, ZERO],
            f2,
            [y1[0, 0], y1[1, 0], ZERO, ZERO],
            f4,
        ]
    move = ExactMatrix.from_rows(
        [[cols[j][i] for j in range(4)] for i in range(4)]
    )
    t = _apply_step(t, chain, move)
    return t, True


def _proportional(b: ExactMatrix, a: ExactMatrix) -> Optional[GaussianRational]:
    """ratio with b == ratio * a, or None when independent (a nonzero)."""
    pivot = next(((i, j) for i in range(a.rows) for j in range(a.cols) if a[i, j]), None)
    if pivot is None:
        raise ValueError("a must be nonzero")
    ratio = b[pivot] / a[pivot]
    for i in range(a.rows):
        for j in range(a.cols):
            if b[i, j] != ratio * a[i, j]:
                return None
    return ratio


def _det2(m: ExactMatrix) -> GaussianRational:
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def _pencil_roots(det_a, det_b, mix):
    """Root lines of det_a s^2 + mix s t + det_b t^2, or None over Q(i)."""
    if det_a:
        disc = mix * mix - gr(4) * det_a * det_b
        sq = sqrt_gaussian(disc)
        if sq is None:
            return None
        two_a = gr(2) * det_a
        return (-mix + sq, two_a), (-mix - sq, two_a), sq.is_zero()
    if det_b:
        if not mix:
            return (ONE, ZERO), (ONE, ZERO), True
        return (ONE, ZERO), (-det_b, mix), False
    if not mix:
        raise ClassificationError("internal error: pencil determinant vanishes identically")
    return (ONE, ZERO), (ZERO, ONE), False


def _leading_case(t: ExtensionTensor, m: int) -> str:
    """Name of the (already normalized) leading m-window, m <= 3."""
    sub = [[[t.w[l][u][v] for v in range(m)] for u in range(m)] for l in range(m)]
    sub_t = validate(sub)
    return _match_catalog(sub_t)


def _stage(t: ExtensionTensor, m: int, chain: List[BasisChange]) -> ExtensionTensor:
    """Bring slice m-1 (storage) to normal form, leading window already done."""
    n = t.n
    s = m - 1  # storage index of the slice being normalized
    if m == 2:
        a = t.entry(1, 0, 0)
        if a:
            t = _apply_step(t, chain, ExactMatrix.diagonal([ONE, a] + [ONE] * (n - 2)))
        return t
    if m == 3:
        leading = _leading_case(t, 2)
        if leading == "n2-case2":
            _expect_zero(t, (2, 1, 1))
            a = t.entry(2, 0, 0)
            if a:
                t = _apply_step(t, chain, ExactMatrix.identity(n).with_entry(2, 1, a))
            b = t.entry(2, 0, 1)
            if b:
                t = _apply_step(t, chain, ExactMatrix.diagonal([ONE, ONE, b] + [ONE] * (n - 3)))
            return t
        # abelian leading part: reduce the terminal cocycle on the 2x2 block
        pattern, t = _window_congruence(t, s, 2, chain)
        if pattern == (1, 0):
            t = _apply_step(t, chain, _perm_columns(n, [0, 2, 1] + list(range(3, n))))
        elif pattern == (1, 1):
            t = _apply_step(t, chain, _complex_pair_map(n, imaginary=True))
        elif pattern == (1, -1):
            t = _apply_step(t, chain, _complex_pair_map(n, imaginary=False))
        return t
    if m == 4:
        leading = _leading_case(t, 3)
        if leading == "n3-case1":
            return _stage4_leading_abelian(t, chain)
        if leading == "n3-case2":
            return _stage4_leading_case2(t, chain)
        if leading == "n3-case3":
            return _stage4_leading_case3(t, chain)
        return _stage4_leading_case4(t, chain)
    raise OrderTooHigh(m)


def _expect_zero(t: ExtensionTensor, idx: Tuple[int, int, int]) -> None:
    if t.entry(*idx):
        raise ClassificationError(
            f"internal error: entry {idx} should vanish for a valid tensor"
        )


def _complex_pair_map(n: int, imaginary: bool) -> ExactMatrix:
    """Map sending the tail diag(1, +-1) on slots (0,1) to the antidiagonal.

    The congruence doubles the cocycle, so slot 2 carries the compensating
    factor 2 (this is the sqrt(2) of the textbook map absorbed into the free
    scale factor).
    """
    second = [I, -I] if imaginary else [ONE, -ONE]
    rows = [[ONE, ONE] + [ZERO] * (n - 2), second + [ZERO] * (n - 2)]
    for i in range(2, n):
        rows.append([ZERO] * i + [gr(2) if i == 2 else ONE] + [ZERO] * (n - i - 1))
    return ExactMatrix.from_rows(rows)


def _window_congruence(
    t: ExtensionTensor, s: int, k: int, chain: List[BasisChange]
) -> Tuple[tuple, ExtensionTensor]:
    """Congruence-diagonalize the k x k block of slice ``s`` in place.

    Returns the sign pattern (+1/-1/0 per slot, +1s first) and the reduced
    tensor; the scale factor is embedded at slot ``s`` of the move.
    """
    from .transform import congruence_normalize

    n = t.n
    block = t.slice_lower(s).submatrix(range(k), range(k))
    norm = congruence_normalize(block)
    if norm is None:
        raise ClassificationError(
            "tail cannot be scaled to {0,+1,-1} entries over Q(i)"
        )
    blk, signs, c = norm
    rows = []
    for i in range(n):
        if i < k:
            rows.append(list(blk.row(i)) + [ZERO] * (n - k))
        elif i == s:
            rows.append([ZERO] * i + [c] + [ZERO] * (n - i - 1))
        else:
            rows.append([ZERO] * i + [ONE] + [ZERO] * (n - i - 1))
    t = _apply_step(t, chain, ExactMatrix.from_rows(rows))
    return tuple(signs), t


def _stage4_leading_abelian(t: ExtensionTensor, chain: List[BasisChange]) -> ExtensionTensor:
    n = t.n
    pattern, t = _window_congruence(t, 3, 3, chain)
    if pattern == (0, 0, 0):
        return t
    if pattern == (1, 1, 1):
        t = _apply_step(t, chain, ExactMatrix.diagonal([ONE, ONE, I, ONE]))
        pattern = (1, 1, -1)
    if pattern == (1, 1, -1):
        # congruence with m^T diag(1,1,-1) m = the (0,2)+(1,1) normal tail
        half = gr(1) / gr(2)
        return _apply_step(t, chain, M([
            [ONE, ZERO, half, ZERO],
            [ZERO, ONE, ZERO, ZERO],
            [ONE, ZERO, -half, ZERO],
            [ZERO, ZERO, ZERO, ONE],
        ]))
    if pattern in ((1, 1, 0), (1, -1, 0)):
        t = _apply_step(t, chain, _perm_columns(n, [0, 1, 3, 2]))
        return _apply_step(t, chain, _complex_pair_map(n, imaginary=(pattern == (1, 1, 0))))
    if pattern == (1, 0, 0):
        return _apply_step(t, chain, _perm_columns(n, [0, 3, 2, 1]))
    raise ClassificationError(f"internal error: unexpected tail pattern {pattern}")


def _stage4_leading_case2(t: ExtensionTensor, chain: List[BasisChange]) -> ExtensionTensor:
    n = t.n
    for idx in ((3, 2, 0), (3, 2, 1), (3, 2, 2)):
        _expect_zero(t, idx)
    q = t.entry(3, 0, 1)
    if q:
        t = _apply_step(t, chain, ExactMatrix.identity(n).with_entry(3, 2, q))
    w11, w22 = t.entry(3, 0, 0), t.entry(3, 1, 1)
    if not w11 and not w22:
        return t
    if not w11:
        t = _apply_step(t, chain, _perm_columns(n, [1, 0, 2, 3]))
        w11, w22 = w22, w11
    if not w22:
        # (1, 0) tail joins case 3c: relabel (x1, x4, x2, x3)
        t = _apply_step(t, chain, ExactMatrix.diagonal([ONE, ONE, ONE, w11]))
        return _apply_step(t, chain, _perm_columns(n, [0, 3, 1, 2]))
    ratio = w22 / w11
    root = sqrt_gaussian(ratio)
    if root is None:
        raise ClassificationError(
            f"tail ratio {ratio} is not a square in Q(i); tensor is outside the catalog orbits"
        )
    t = _apply_step(
        t, chain, ExactMatrix.diagonal([ONE, ONE / root, ONE / root, w11])
    )
    # diag(1,1) tail joins case 3b: split into the two inert square directions
    return _apply_step(t, chain, M([
        [ONE, ZERO, ONE, ZERO],
        [-ONE, ZERO, ONE, ZERO],
        [ZERO, gr(-2), ZERO, gr(2)],
        [ZERO, gr(2), ZERO, gr(2)],
    ]))


def _stage4_leading_case3(t: ExtensionTensor, chain: List[BasisChange]) -> ExtensionTensor:
    n = t.n
    for idx in ((3, 1, 1), (3, 2, 1)):
        _expect_zero(t, idx)
    p = t.entry(3, 0, 0)
    if p:
        t = _apply_step(t, chain, ExactMatrix.identity(n).with_entry(3, 1, p))
    a = t.entry(3, 0, 1)
    b = t.entry(3, 0, 2)
    d = t.entry(3, 2, 2)
    if a:
        if b:
            t = _apply_step(t, chain, ExactMatrix.identity(n).with_entry(1, 2, -b / a))
            d = t.entry(3, 2, 2)
        if d:
            return _apply_step(
                t, chain,
                ExactMatrix.diagonal([a * d, a * a * d * d, a * a * d, a ** 4 * d ** 3]),
            )
        t = _apply_step(t, chain, ExactMatrix.diagonal([ONE, ONE, ONE, a]))
        return _apply_step(t, chain, _perm_columns(n, [0, 1, 3, 2]))
    if b:
        if d:
            # joins case 3b: x1 = -d u0 + b u2 and x3 = u2 have inert squares
            return _apply_step(t, chain, M([
                [-d, ZERO, ZERO, ZERO],
                [ZERO, d * d, ZERO, ZERO],
                [b, ZERO, ONE, ZERO],
                [ZERO, -d * b * b, ZERO, d],
            ]))
        return _apply_step(t, chain, ExactMatrix.diagonal([ONE, ONE, ONE, b]))
    if d:
        return _apply_step(t, chain, ExactMatrix.diagonal([ONE, ONE, ONE, d]))
    return t


def _stage4_leading_case4(t: ExtensionTensor, chain: List[BasisChange]) -> ExtensionTensor:
    n = t.n
    for idx in ((3, 2, 2), (3, 2, 1)):
        _expect_zero(t, idx)
    if t.entry(3, 1, 1) != t.entry(3, 0, 2):
        raise ClassificationError("internal error: commutation constraint violated")
    p, q = t.entry(3, 0, 0), t.entry(3, 0, 1)
    if p or q:
        move = ExactMatrix.identity(n).with_entry(3, 1, p).with_entry(3, 2, q)
        t = _apply_step(t, chain, move)
    z = t.entry(3, 1, 1)
    if z:
        t = _apply_step(t, chain, ExactMatrix.diagonal([ONE, ONE, ONE, z]))
    return t


# ---------------------------------------------------------------------------
# Equivalence checking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Equivalent:
    witness: tuple

    kind = "equivalent"


@dataclass(frozen=True)
class Distinct:
    reason: str

    kind = "distinct"


@dataclass(frozen=True)
class Unknown:
    reason: str

    kind = "unknown"


def fingerprint(t: ExtensionTensor) -> dict:
    """Basis-dependent invariants of a *normal form* used to explain verdicts."""
    n = t.n
    ranks = [rank(t.slice_lower(lam)) for lam in range(n)]
    tail = t.slice_lower(n - 1).submatrix(range(n - 1), range(n - 1))
    return {
        "slice_ranks": ranks,
        "derived_dims": derived_series_dims(t),
        "tail_nullity": (n - 1) - rank(tail),
    }


def derived_series_dims(t: ExtensionTensor) -> List[int]:
    """Dimensions of span{x * y : x, y in D_k}, a basis-free invariant."""
    from .linalg import hstack, rank as _rank

    n = t.n
    current = [ExactMatrix.column([ONE if i == j else ZERO for i in range(n)]) for j in range(n)]
    dims: List[int] = []
    while True:
        prods = []
        for x in current:
            for y in current:
                vec = [
                    sum(
                        (t.entry(lam, mu, nu) * x[mu, 0] * y[nu, 0] for mu in range(n) for nu in range(n)),
                        ZERO,
                    )
                    for lam in range(n)
                ]
                if any(vec):
                    prods.append(ExactMatrix.column(vec))
        r = _rank(hstack(prods)) if prods else 0
        dims.append(r)
        if r == 0 or (len(dims) >= 2 and dims[-1] == dims[-2]):
            break
        current = _column_basis(prods)
    return dims


def _column_basis(cols: List[ExactMatrix]) -> List[ExactMatrix]:
    from .linalg import hstack, rref

    stacked = hstack(cols)
    _, pivots = rref(stacked)
    return [cols[p] for p in pivots]


def equivalence_check(a: ExtensionTensor, b: ExtensionTensor):
    """Decide whether two tensors are related by a basis change.

    Returns Equivalent(witness) when both classify to the same label (the
    witness maps a onto b), Distinct(reason) when they land on different
    normal forms, and Unknown when classification fails for either input.
    """
    if a.n != b.n:
        return Distinct(f"orders differ: {a.n} vs {b.n}")
    if a.w == b.w:
        return Equivalent(())
    try:
        la, ca = classify(a)
        lb, cb = classify(b)
    except ClassificationError as err:
        return Unknown(str(err))
    if la == lb:
        witness = tuple(ca) + tuple(x.inverse() for x in reversed(cb))
        return Equivalent(witness)
    fa = fingerprint(catalog_entry(la))
    fb = fingerprint(catalog_entry(lb))
    for key in ("slice_ranks", "derived_dims", "tail_nullity"):
        if fa[key] != fb[key]:
            return Distinct(f"{key} differs: {fa[key]} vs {fb[key]}")
    return Distinct(f"normal forms differ: {la.name} vs {lb.name}")


def catalog_entry(label: CaseLabel) -> ExtensionTensor:
    entry = catalog(label.order).lookup(label.name)
    return append_semisimple(entry) if label.semidirect else entry
