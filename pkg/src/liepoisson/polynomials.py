"""Sparse multivariate polynomials over Q(i).

Casimir coefficient polynomials are sparse (a handful of monomials even at
order eight), so terms live in a dict keyed by exponent tuples.  Printing and
canonical comparison use graded lexicographic order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

from .scalars import GaussianRational, ONE, ZERO, parse_scalar

Exponents = Tuple[int, ...]


def _as_scalar(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot interpret {x!r} as a scalar")


class Poly:
    """Polynomial in nvars variables, term dict {exponent tuple: scalar}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Exponents, GaussianRational] = None):
        clean: Dict[Exponents, GaussianRational] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent tuple {e} has wrong length for {nvars} variables")
            c = _as_scalar(c)
            if c:
                clean[e] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "Poly":
        return Poly(nvars, {})

    @staticmethod
    def constant(nvars: int, c) -> "Poly":
        return Poly(nvars, {(0,) * nvars: _as_scalar(c)})

    @staticmethod
    def variable(nvars: int, idx: int) -> "Poly":
        e = [0] * nvars
        e[idx] = 1
        return Poly(nvars, {tuple(e): ONE})

    @staticmethod
    def monomial(nvars: int, exps: Sequence[int], c=1) -> "Poly":
        return Poly(nvars, {tuple(exps): _as_scalar(c)})

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            acc = terms.get(e, ZERO) + c
            if acc:
                terms[e] = acc
            else:
                terms.pop(e, None)
        return Poly(self.nvars, terms)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            terms: Dict[Exponents, GaussianRational] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    acc = terms.get(e, ZERO) + c1 * c2
                    if acc:
                        terms[e] = acc
                    else:
                        terms.pop(e, None)
            return Poly(self.nvars, terms)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = _as_scalar(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def diff(self, var: int) -> "Poly":
        terms: Dict[Exponents, GaussianRational] = {}
        for e, c in self.terms.items():
            if e[var]:
                e2 = list(e)
                e2[var] -= 1
                terms[tuple(e2)] = c * GaussianRational(e[var])
        return Poly(self.nvars, terms)

    # -- queries --------------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def uses_variable(self, var: int) -> bool:
        return any(e[var] for e in self.terms)

    def coefficient(self, exps: Sequence[int]) -> GaussianRational:
        return self.terms.get(tuple(exps), ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def sorted_terms(self):
        """Terms in graded-lex order (degree first, then lexicographic)."""
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), tuple(-x for x in ec[0])))

    def to_json(self) -> list:
        return [[list(e), str(c)] for e, c in self.sorted_terms()]

    @staticmethod
    def from_json(nvars: int, doc: Iterable) -> "Poly":
        return Poly(nvars, {tuple(e): parse_scalar(c) for e, c in doc})

    def format(self, var_names: Sequence[str]) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for idx, k in enumerate(e):
                if k == 1:
                    factors.append(var_names[idx])
                elif k > 1:
                    factors.append(f"({var_names[idx]})^{k}")
            body = " ".join(factors)
            if not body:
                parts.append(str(c))
            elif c.is_one():
                parts.append(body)
            elif c == -ONE:
                parts.append(f"-{body}")
            else:
                cs = str(c)
                if ("+" in cs[1:]) or ("-" in cs[1:]):
                    cs = f"({cs})"
                parts.append(f"{cs} {body}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return self.format([f"x{i}" for i in range(self.nvars)])
