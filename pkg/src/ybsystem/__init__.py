"""Exact solver and verifier for the constant Yang-Baxter system in two unknowns Q, R."""

from .arith import QQ, FunctionField, ParseError, PrimeField, parse_scalar
from .catalog import catalog_entries, get_entry, instantiate
from .matrix import Matrix, embed, inverse, kron, permutation_P
from .solver import cubic_constraints, enumerate_fp, null_space, solve_linear, verify_family
from .symmetry import SymmetryElement, apply_symmetry, fingerprint, restricted_equivalence
from .system import YBPair, extended_residuals, is_solution, qbar, system_residuals

__all__ = [
    "QQ", "FunctionField", "ParseError", "PrimeField", "parse_scalar",
    "catalog_entries", "get_entry", "instantiate",
    "Matrix", "embed", "inverse", "kron", "permutation_P",
    "cubic_constraints", "enumerate_fp", "null_space", "solve_linear", "verify_family",
    "SymmetryElement", "apply_symmetry", "fingerprint", "restricted_equivalence",
    "YBPair", "extended_residuals", "is_solution", "qbar", "system_residuals",
]
