"""Exact classification and Casimir invariants of Lie-Poisson bracket extensions.

The package works over the Gaussian rationals throughout: extension tensors
are validated against the two bracket laws, reduced to catalog normal forms
with replayable witnesses, and their Casimir invariants are synthesized by
the coextension recursion and verified symbolically.  A small floating-point
module realizes any real tensor on tuples of so(3)* momenta and confirms
the quadratic invariants numerically.
"""

from .scalars import GaussianRational, gr, parse_scalar
from .linalg import (
    BasisChange,
    ExactMatrix,
    eigenvalues_gaussian,
    null_space,
    pseudoinverse,
    simultaneous_block_split,
    simultaneous_triangularize,
)
from .extension import (
    ExtensionTensor,
    abelian,
    append_semisimple,
    crmhd,
    direct_sum,
    leibniz,
    low_beta_rmhd,
    pure_semidirect,
    strip_semisimple,
    validate,
)
from .transform import (
    apply,
    apply_chain,
    congruence_reduce_tail,
    normalize_w0_to_identity,
    remove_coboundary,
)
from .classify import CaseLabel, Catalog, catalog, classify, equivalence_check
from .casimir import (
    CasimirFamily,
    build_coextension,
    casimir_condition_check,
    format_family,
    leibniz_casimirs_closed_form,
    quadratic_casimir_basis,
    synthesize_casimirs,
)
from .dynamics import FieldState, HamiltonianSpec, eom_rhs, simulate

__version__ = "0.1.0"

__all__ = [
    "BasisChange",
    "CaseLabel",
    "Catalog",
    "CasimirFamily",
    "ExactMatrix",
    "ExtensionTensor",
    "FieldState",
    "GaussianRational",
    "HamiltonianSpec",
    "abelian",
    "append_semisimple",
    "apply",
    "apply_chain",
    "build_coextension",
    "casimir_condition_check",
    "catalog",
    "classify",
    "congruence_reduce_tail",
    "crmhd",
    "direct_sum",
    "eigenvalues_gaussian",
    "eom_rhs",
    "equivalence_check",
    "format_family",
    "gr",
    "leibniz",
    "leibniz_casimirs_closed_form",
    "low_beta_rmhd",
    "normalize_w0_to_identity",
    "null_space",
    "parse_scalar",
    "pseudoinverse",
    "pure_semidirect",
    "quadratic_casimir_basis",
    "remove_coboundary",
    "simulate",
    "simultaneous_block_split",
    "simultaneous_triangularize",
    "strip_semisimple",
    "synthesize_casimirs",
    "validate",
]
