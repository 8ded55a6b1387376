"""Casimir invariants of Lie-Poisson brackets built from extension tensors.

A Casimir density C(xi^0, ..., xi^n) must satisfy the symmetry condition

    W_lam^{mu nu} C_{,mu sig}  symmetric under lam <-> sig,  for every nu,

which :func:`casimir_condition_check` verifies symbolically, treating the
formal derivatives of the arbitrary functions as independent symbols.

Synthesis works through the coextension.  With Wn the symmetric matrix of
the last slice restricted to the solvable indices (excluding the last), its
exact pseudoinverse and the projector P = Wn Wn^+ define the dual tensor
omega (the coextension), and the Casimir of direction nu is the series
C = sum_i g^(i) f_i(xi^n) whose coefficients obey

    g^(0) = P xi,   g^(1)_,ts = omega^nu_ts,   g^(i)_,ts = omega^mu_ts g^(i-1)_,mu.

Nilpotency terminates the series; each g^(i) is recovered from its Hessian
by Euler's homogeneous-function identity.  Singular Wn requires two
conditions (the projector commuting with the subextension slices and the
coextension product symmetry); when they fail the tensor splits as a direct
sum on the support of its slices and the blocks are synthesized separately,
with the simultaneous-eigenvector directions merged into one arbitrary
function of several arguments.  A semidirect tensor contributes one extra
family in the semisimple direction exactly when Wn is nonsingular.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .extension import ExtensionTensor, TensorError
from .linalg import ExactMatrix, hstack, null_space, pseudoinverse, rank
from .polynomials import Poly
from .scalars import GaussianRational, ONE, ZERO, gr, parse_scalar

GREEK_XI = "\N{GREEK SMALL LETTER XI}"


class CasimirError(TensorError):
    pass


class SynthesisObstruction(CasimirError):
    """Solvability or coextension condition fails and no split helps."""


# ---------------------------------------------------------------------------
# Symbolic data types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FormalFunction:
    """An arbitrary function of linear coordinates u^(a) . xi."""

    label: str
    args: Tuple[Tuple[GaussianRational, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(tuple(u) for u in self.args))


@dataclass(frozen=True)
class CasimirTerm:
    """poly * (derivative of func), deriv a multi-index over func.args."""

    poly: Poly
    func: Optional[FormalFunction]
    deriv: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "deriv", tuple(self.deriv))
        if self.func is not None and len(self.deriv) != len(self.func.args):
            raise ValueError("derivative multi-index length must match args")


@dataclass(frozen=True)
class CasimirFamily:
    terms: Tuple[CasimirTerm, ...]
    n: int
    semidirect: bool = False

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def nonzero(self) -> bool:
        return any(not t.poly.is_zero() for t in self.terms)

    def to_json(self) -> dict:
        out = []
        for t in self.terms:
            entry = {"poly": t.poly.to_json(), "deriv": list(t.deriv)}
            if t.func is not None:
                entry["func"] = t.func.label
                entry["args"] = [[str(c) for c in u] for u in t.func.args]
            out.append(entry)
        return {"n": self.n, "semidirect": self.semidirect, "terms": out}

    @staticmethod
    def from_json(doc: dict) -> "CasimirFamily":
        terms = []
        for entry in doc["terms"]:
            func = None
            if "func" in entry:
                func = FormalFunction(
                    entry["func"],
                    tuple(tuple(parse_scalar(c) for c in u) for u in entry["args"]),
                )
            terms.append(
                CasimirTerm(Poly.from_json(doc["n"], entry["poly"]), func, tuple(entry["deriv"]))
            )
        return CasimirFamily(tuple(terms), doc["n"], doc.get("semidirect", False))


# ---------------------------------------------------------------------------
# Condition checker
# ---------------------------------------------------------------------------

def _second_derivatives(fam: CasimirFamily):
    """Hessian of the density as {(label, deriv): Poly} per index pair."""
    n = fam.n
    hess: Dict[Tuple[int, int], Dict] = {}

    def add(mu, sig, key, poly):
        if poly.is_zero():
            return
        cell = hess.setdefault((mu, sig), {})
        cell[key] = cell.get(key, Poly.zero(n)) + poly
        if cell[key].is_zero():
            del cell[key]

    for term in fam.terms:
        key0 = (term.func.label if term.func else None, term.deriv)
        args = term.func.args if term.func else ()
        for mu in range(n):
            p_mu = term.poly.diff(mu)
            for sig in range(n):
                add(mu, sig, key0, p_mu.diff(sig))
                for a, u in enumerate(args):
                    if u[sig]:
                        bumped = list(term.deriv)
                        bumped[a] += 1
                        add(mu, sig, (term.func.label, tuple(bumped)),
                            p_mu.scale(u[sig]))
            for a, u in enumerate(args):
                if not u[mu]:
                    continue
                bumped = list(term.deriv)
                bumped[a] += 1
                key1 = (term.func.label, tuple(bumped))
                for sig in range(n):
                    add(mu, sig, key1, term.poly.diff(sig).scale(u[mu]))
                    for b, u2 in enumerate(args):
                        if u2[sig]:
                            bumped2 = list(bumped)
                            bumped2[b] += 1
                            add(mu, sig, (term.func.label, tuple(bumped2)),
                                term.poly.scale(u[mu] * u2[sig]))
    return hess


@dataclass(frozen=True)
class ConditionReport:
    passed: bool
    failure: Optional[Tuple[int, int, int]] = None
    residual: Optional[dict] = None

    def __bool__(self):
        return self.passed


def casimir_condition_check(t: ExtensionTensor, fam: CasimirFamily) -> ConditionReport:
    """Verify the symmetry condition for a candidate Casimir family.

    Forms W_lam^{mu nu} C_{,mu sig} symbolically and compares it with the
    (lam <-> sig)-swapped contraction for every nu; the first failing triple
    (lam, sig, nu) is reported with its residual.
    """
    if fam.n != t.n:
        raise CasimirError(f"family has {fam.n} variables, tensor has {t.n}")
    n = t.n
    hess = _second_derivatives(fam)

    def contract(lam, sig, nu):
        out: Dict = {}
        for mu in range(n):
            w = t.entry(lam, mu, nu)
            if not w:
                continue
            for key, poly in hess.get((mu, sig), {}).items():
                out[key] = out.get(key, Poly.zero(n)) + poly.scale(w)
        return {k: p for k, p in out.items() if not p.is_zero()}

    for nu in range(n):
        for lam in range(n):
            for sig in range(lam):
                lhs = contract(lam, sig, nu)
                rhs = contract(sig, lam, nu)
                if lhs != rhs:
                    residual = dict(lhs)
                    for key, poly in rhs.items():
                        residual[key] = residual.get(key, Poly.zero(n)) - poly
                    residual = {k: p for k, p in residual.items() if not p.is_zero()}
                    return ConditionReport(False, (lam, sig, nu), residual)
    return ConditionReport(True)


# ---------------------------------------------------------------------------
# Coextension
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoextensionResult:
    wn: ExactMatrix
    wn_pinv: ExactMatrix
    projector: ExactMatrix
    cow: tuple                      # cow[mu][tau][sig], solvable-local indices
    solvable_ok: bool
    coext_ok: bool
    nonsingular: bool
    offset: int                     # storage index of the first solvable slot


def _solvable_range(t: ExtensionTensor) -> Tuple[int, int]:
    s = 1 if t.semidirect else 0
    return s, t.n - 1


def build_coextension(t: ExtensionTensor) -> CoextensionResult:
    """Wn, its exact pseudoinverse, the projector, and the dual tensor omega.

    Expects a normalized tensor (lower-triangular, identity first slice when
    semidirect).  Failure of the solvability or symmetry condition is
    recorded in the flags, not raised.
    """
    if not t.is_lower_triangular():
        raise CasimirError("coextension needs a lower-triangular tensor")
    if t.semidirect and not t.slice_upper(0).is_identity():
        raise CasimirError("semidirect tensor must have identity first slice")
    s, last = _solvable_range(t)
    k = last - s
    wn = ExactMatrix(k, k, [t.entry(last, s + mu, s + nu) for mu in range(k) for nu in range(k)])
    wn_pinv = pseudoinverse(wn)
    projector = wn @ wn_pinv
    nonsingular = rank(wn) == k
    sub = [
        ExactMatrix(k, k, [t.entry(s + sig, s + rho, s + nu) for rho in range(k) for nu in range(k)])
        for sig in range(k)
    ]
    cow = [[[ZERO] * k for _ in range(k)] for _ in range(k)]
    for nu in range(k):
        for lam in range(k):
            for sig in range(k):
                acc = ZERO
                for rho in range(k):
                    acc = acc + wn_pinv[sig, rho] * sub[lam][rho, nu]
                    acc = acc + wn_pinv[lam, rho] * sub[sig][rho, nu]
                for rho in range(k):
                    for kap in range(k):
                        for mu in range(k):
                            c = wn_pinv[lam, rho] * wn_pinv[sig, kap] * wn[rho, mu] * sub[mu][kap, nu]
                            acc = acc - c
                cow[nu][lam][sig] = acc
    solvable_ok = all(projector @ m == m @ projector for m in sub)
    coext_ok = _coextension_symmetric(cow, k)
    freeze = tuple(tuple(tuple(row) for row in plane) for plane in cow)
    return CoextensionResult(wn, wn_pinv, projector, freeze, solvable_ok, coext_ok, nonsingular, s)


def _coextension_symmetric(cow, k: int) -> bool:
    for tau in range(k):
        for sig in range(k):
            for lam in range(k):
                for nu in range(k):
                    lhs = sum((cow[mu][tau][sig] * cow[nu][mu][lam] for mu in range(k)), ZERO)
                    rhs = sum((cow[mu][tau][lam] * cow[nu][mu][sig] for mu in range(k)), ZERO)
                    if lhs != rhs:
                        return False
    return True


# ---------------------------------------------------------------------------
# Synthesis
# ---------------------------------------------------------------------------

def _series_from_hessian_recursion(
    n: int, start: Poly, cow, local_vars: Sequence[int]
) -> List[Poly]:
    """Iterate g^(i)_,ts = omega^mu_ts g^(i-1)_,mu from the given start.

    Each g^(i) is homogeneous, and is rebuilt from its Hessian by Euler's
    identity g = sum xi_t xi_s H_ts / (d (d-1)) at degree d.
    """
    series = [start]
    k = len(local_vars)
    for _ in range(4 * n + 4):
        prev = series[-1]
        if prev.is_zero():
            series.pop()
            break
        partials = [prev.diff(v) for v in local_vars]
        acc = Poly.zero(n)
        for tau in range(k):
            for sig in range(k):
                coeff_poly = Poly.zero(n)
                for mu in range(k):
                    c = cow[mu][tau][sig]
                    if c and not partials[mu].is_zero():
                        coeff_poly = coeff_poly + partials[mu].scale(c)
                if not coeff_poly.is_zero():
                    mono = Poly.variable(n, local_vars[tau]) * Poly.variable(n, local_vars[sig])
                    acc = acc + mono * coeff_poly
        if acc.is_zero():
            break
        degree = prev.degree() + 1
        series.append(acc.scale(gr(1) / gr(degree * (degree - 1))))
    else:
        raise CasimirError("coextension series failed to terminate")
    return series


def _family_from_series(n: int, series: List[Poly], arg_index: int,
                        label: str, semidirect: bool) -> CasimirFamily:
    u = tuple(ONE if m == arg_index else ZERO for m in range(n))
    func = FormalFunction(label, (u,))
    terms = [CasimirTerm(g, func, (i,)) for i, g in enumerate(series) if not g.is_zero()]
    return CasimirFamily(tuple(terms), n, semidirect)


def _support_components(t: ExtensionTensor, lo: int, hi: int) -> List[List[int]]:
    """Connected components of the slice-support hypergraph on [lo, hi)."""
    parent = {i: i for i in range(lo, hi)}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    for lam in range(lo, hi):
        for mu in range(lo, hi):
            for nu in range(lo, hi):
                if t.entry(lam, mu, nu):
                    union(lam, mu)
                    union(mu, nu)
    groups: Dict[int, List[int]] = {}
    for i in range(lo, hi):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _eigenvector_family(t: ExtensionTensor, label: str) -> Optional[CasimirFamily]:
    """One family per joint-eigenvector space, a function of several args.

    The covectors are the simultaneous eigenvectors of all slice matrices;
    for a single degenerate block their eigenvalue tuple is read off the
    diagonals.
    """
    n = t.n
    stacked_rows: List[List[GaussianRational]] = []
    for nu in range(n):
        m = t.slice_upper(nu)
        ev = m.diagonal_values()[0] if n else ZERO
        shifted = m - ExactMatrix.identity(n).scale(ev)
        stacked_rows.extend(shifted.to_rows())
    stacked = ExactMatrix.from_rows(stacked_rows) if stacked_rows else ExactMatrix.zeros(0, n)
    kernel = null_space(stacked)
    if not kernel:
        return None
    args = tuple(tuple(v[i, 0] for i in range(n)) for v in kernel)
    func = FormalFunction(label, args)
    term = CasimirTerm(Poly.constant(n, 1), func, (0,) * len(args))
    return CasimirFamily((term,), n, t.semidirect)


def synthesize_casimirs(t: ExtensionTensor) -> List[CasimirFamily]:
    """All Casimir families of a normalized tensor.

    One family per projector-visible solvable direction (via the
    coextension recursion, run per support component so direct sums split),
    one multi-argument family over the simultaneous eigenvectors, and the
    extra semidirect family exactly when Wn is nonsingular.
    """
    if not t.is_lower_triangular():
        raise CasimirError("synthesis needs a normalized (lower-triangular) tensor")
    s, _ = _solvable_range(t)
    families: List[CasimirFamily] = []
    components = [c for c in _support_components(t, s, t.n) if len(c) > 1]
    for comp in components:
        families.extend(_component_families(t, comp, lambda: "f"))
    eig = _eigenvector_family(t, "f")
    if eig is not None:
        families.append(eig)
    if t.semidirect:
        co = build_coextension(t)
        if co.nonsingular:
            families.insert(0, _semidirect_family(t, co, "f"))
    families = _relabel(families)
    for fam in families:
        report = casimir_condition_check(t, fam)
        if not report:
            raise CasimirError(
                f"internal error: synthesized family fails the condition at {report.failure}"
            )
    return families


def _relabel(families: List[CasimirFamily]) -> List[CasimirFamily]:
    """Assign fresh function names f, g, h, k, ... in presentation order."""
    names = "fghk" + "pqrstuvw"
    out = []
    for pos, fam in enumerate(families):
        label = names[pos] if pos < len(names) else f"f{pos}"
        terms = []
        for t in fam.terms:
            func = FormalFunction(label, t.func.args) if t.func is not None else None
            terms.append(CasimirTerm(t.poly, func, t.deriv))
        out.append(CasimirFamily(tuple(terms), fam.n, fam.semidirect))
    return out


def _component_families(t: ExtensionTensor, comp: List[int], next_label) -> List[CasimirFamily]:
    """Families of one support component, excluding its eigenvector family."""
    n = t.n
    idx = comp
    k = len(idx) - 1
    local_last = idx[-1]
    wn = ExactMatrix(k, k, [t.entry(local_last, idx[mu], idx[nu]) for mu in range(k) for nu in range(k)])
    wn_pinv = pseudoinverse(wn)
    projector = wn @ wn_pinv
    nonsingular = rank(wn) == k
    sub = [
        ExactMatrix(k, k, [t.entry(idx[sig], idx[rho], idx[nu]) for rho in range(k) for nu in range(k)])
        for sig in range(k)
    ]
    cow = _cow_tensor(wn, wn_pinv, sub, k)
    if not nonsingular:
        ok = all(projector @ m == m @ projector for m in sub)
        if not ok or not _coextension_symmetric(cow, k):
            raise SynthesisObstruction(
                "solvability/coextension condition fails on an indecomposable block"
            )
    families = []
    kept_rows: List[ExactMatrix] = []
    for nu in range(k):
        row = ExactMatrix.column(list(projector.row(nu)))
        if row.is_zero():
            continue
        if kept_rows and rank(hstack(kept_rows + [row])) == len(kept_rows):
            continue
        kept_rows.append(row)
        g0 = Poly.zero(n)
        for rho in range(k):
            if projector[nu, rho]:
                g0 = g0 + Poly.variable(n, idx[rho]).scale(projector[nu, rho])
        series = _series_from_hessian_recursion(n, g0, cow, idx[:k])
        families.append(_family_from_series(n, series, local_last, next_label(), t.semidirect))
    return families


def _cow_tensor(wn, wn_pinv, sub, k):
    cow = [[[ZERO] * k for _ in range(k)] for _ in range(k)]
    for nu in range(k):
        for lam in range(k):
            for sig in range(k):
                acc = ZERO
                for rho in range(k):
                    acc = acc + wn_pinv[sig, rho] * sub[lam][rho, nu]
                    acc = acc + wn_pinv[lam, rho] * sub[sig][rho, nu]
                for rho in range(k):
                    for kap in range(k):
                        for mu in range(k):
                            acc = acc - (wn_pinv[lam, rho] * wn_pinv[sig, kap]
                                         * wn[rho, mu] * sub[mu][kap, nu])
                cow[nu][lam][sig] = acc
    return cow


def _semidirect_family(t: ExtensionTensor, co: CoextensionResult, label: str) -> CasimirFamily:
    """The extra family in the semisimple direction (nonsingular Wn only)."""
    n = t.n
    s = co.offset
    k = co.wn.rows
    g0 = Poly.variable(n, 0)
    g1 = Poly.zero(n)
    for tau in range(k):
        for sig in range(k):
            c = co.wn_pinv[tau, sig]
            if c:
                g1 = g1 + (Poly.variable(n, s + tau) * Poly.variable(n, s + sig)).scale(c / gr(2))
    series = [g0]
    if not g1.is_zero():
        local = [s + m for m in range(k)]
        series += _series_from_hessian_recursion(n, g1, co.cow, local)
    return _family_from_series(n, series, t.n - 1, label, True)


# ---------------------------------------------------------------------------
# Leibniz closed form
# ---------------------------------------------------------------------------

def leibniz_casimirs_closed_form(order: int, nu: int, semidirect: bool = False,
                                 label: str = "f") -> CasimirFamily:
    """The Leibniz Casimir of direction nu, as a terminating k-sum.

    Solvable labels run 1..order (nu = order is the bare arbitrary
    function); the semidirect variant accepts nu = 0..order and has the
    same coefficients as direction nu+1 of the solvable extension one order
    higher, with the labels shifted down to start at zero.
    """
    from itertools import combinations_with_replacement
    from math import factorial

    if semidirect:
        if nu < 0 or nu > order:
            raise CasimirError(f"nu must lie in 0..{order}")
        inner = leibniz_casimirs_closed_form(order + 1, nu + 1, semidirect=False, label=label)
        return CasimirFamily(inner.terms, inner.n, True)
    if nu < 1 or nu > order:
        raise CasimirError(f"nu must lie in 1..{order}")
    n = order
    last = n - 1
    u = tuple(ONE if m == last else ZERO for m in range(n))
    func = FormalFunction(label, (u,))
    if nu == order:
        return CasimirFamily((CasimirTerm(Poly.constant(n, 1), func, (0,)),), n, False)
    terms = []
    pool = list(range(last))          # storage slots carrying labels 1..n-1
    for kk in range(1, n - nu + 1):
        needed = nu + (kk - 1) * n
        poly = Poly.zero(n)
        for combo in combinations_with_replacement(pool, kk):
            if sum(m + 1 for m in combo) != needed:
                continue
            exps = [0] * n
            for m in combo:
                exps[m] += 1
            denom = 1
            for e in exps:
                denom *= factorial(e)
            poly = poly + Poly.monomial(n, exps, gr(1) / gr(denom))
        if not poly.is_zero():
            terms.append(CasimirTerm(poly, func, (kk - 1,)))
    return CasimirFamily(tuple(terms), n, False)


# ---------------------------------------------------------------------------
# Quadratic Casimirs
# ---------------------------------------------------------------------------

def quadratic_casimir_basis(t: ExtensionTensor) -> List[ExactMatrix]:
    """Basis of symmetric Q with W_lam^{mu nu} Q_{mu sig} = W_sig^{mu nu} Q_{mu lam}.

    These are the constant-Hessian Casimirs 1/2 Q_{mu nu} xi^mu xi^nu, found
    by a direct null-space computation over the upper-triangle coordinates
    of Q.
    """
    n = t.n
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    index = {p: k for k, p in enumerate(pairs)}

    def q_entry(coeffs, mu, sig):
        key = (mu, sig) if mu <= sig else (sig, mu)
        return coeffs[index[key]]

    rows = []
    for nu in range(n):
        for lam in range(n):
            for sig in range(lam):
                row = [ZERO] * len(pairs)
                for mu in range(n):
                    w1 = t.entry(lam, mu, nu)
                    if w1:
                        key = (mu, sig) if mu <= sig else (sig, mu)
                        row[index[key]] = row[index[key]] + w1
                    w2 = t.entry(sig, mu, nu)
                    if w2:
                        key = (mu, lam) if mu <= lam else (lam, mu)
                        row[index[key]] = row[index[key]] - w2
                if any(row):
                    rows.append(row)
    if not rows:
        kernel = [ExactMatrix.column([ONE if k == j else ZERO for k in range(len(pairs))])
                  for j in range(len(pairs))]
    else:
        kernel = null_space(ExactMatrix.from_rows(rows))
    out = []
    for v in kernel:
        q = [[ZERO] * n for _ in range(n)]
        for (i, j), k in index.items():
            q[i][j] = v[k, 0]
            q[j][i] = v[k, 0]
        out.append(ExactMatrix.from_rows(q))
    return out


def quadratic_family(t: ExtensionTensor, q: ExactMatrix) -> CasimirFamily:
    """The constant-Hessian density 1/2 Q_{mu nu} xi^mu xi^nu as a family."""
    n = t.n
    poly = Poly.zero(n)
    for i in range(n):
        for j in range(n):
            if q[i, j]:
                poly = poly + (Poly.variable(n, i) * Poly.variable(n, j)).scale(q[i, j] / gr(2))
    return CasimirFamily((CasimirTerm(poly, None, ()),), n, t.semidirect)


# ---------------------------------------------------------------------------
# Comparison and pretty printing
# ---------------------------------------------------------------------------

def _canonical_terms(fam: CasimirFamily):
    """Family contents with function labels stripped and args sorted."""
    out = []
    for t in fam.terms:
        if t.poly.is_zero():
            continue
        if t.func is None:
            args, deriv = None, t.deriv
        else:
            order = sorted(range(len(t.func.args)),
                           key=lambda a: tuple(x.sort_key() for x in t.func.args[a]))
            args = tuple(t.func.args[a] for a in order)
            deriv = tuple(t.deriv[a] for a in order)
        poly = tuple(sorted(t.poly.terms.items(), key=lambda kv: kv[0]))
        out.append((args, deriv, poly))
    return tuple(sorted(out, key=repr))


def families_equal(a: CasimirFamily, b: CasimirFamily) -> bool:
    """Equality up to relabeling of the arbitrary-function names."""
    if a.n != b.n:
        return False
    return _canonical_terms(a) == _canonical_terms(b)


def family_sets_equal(xs: Sequence[CasimirFamily], ys: Sequence[CasimirFamily]) -> bool:
    """Multiset equality of families, label-insensitive."""
    if len(xs) != len(ys):
        return False
    remaining = list(ys)
    for x in xs:
        for i, y in enumerate(remaining):
            if families_equal(x, y):
                del remaining[i]
                break
        else:
            return False
    return True


def _var_names(fam: CasimirFamily) -> List[str]:
    if fam.semidirect:
        return [f"{GREEK_XI}{m}" for m in range(fam.n)]
    return [f"{GREEK_XI}{m + 1}" for m in range(fam.n)]


def format_family(fam: CasimirFamily) -> str:
    """Render in the table notation, e.g. "xi1 f(xi3) + 1/2 (xi2)^2 f'(xi3)"."""
    names = _var_names(fam)
    parts = []
    for term in fam.terms:
        if term.poly.is_zero():
            continue
        body = term.poly.format(names)
        if term.func is None:
            parts.append(body)
            continue
        argtext = ", ".join(
            _covector_text(u, names) for u in term.func.args
        )
        total = sum(term.deriv)
        primes = "'" * total
        ftext = f"{term.func.label}{primes}({argtext})"
        if body == "1":
            parts.append(ftext)
        else:
            if len(term.poly.terms) > 1:
                body = f"({body})"
            parts.append(f"{body} {ftext}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:].lstrip()}" if p.startswith("-") else f" + {p}"
    return out


def _covector_text(u, names) -> str:
    pieces = []
    for idx, c in enumerate(u):
        if not c:
            continue
        if c == ONE:
            pieces.append(names[idx])
        else:
            pieces.append(f"{c}{names[idx]}")
    return " + ".join(pieces) if pieces else "0"
