"""Computation rules that make the symmetric maximum associative."""
from .core import PsiEncoding, decode, encode, symmax
from .rules import parse, to_text
from .engine import DeletionProfile, evaluate, run
from .canonical import CanonicalRule, canonical_print, equivalent, factorize, well_formed
from .order import Classification, OrderVerdict, Relation, classify, compare, kernel_compare
from .oracle import achievable_values
from .search import Budget, bounded_search
from .hasse import hasse, to_dot

__version__ = "0.1.0"

__all__ = [
    "PsiEncoding", "decode", "encode", "symmax",
    "parse", "to_text",
    "DeletionProfile", "evaluate", "run",
    "CanonicalRule", "canonical_print", "equivalent", "factorize", "well_formed",
    "Classification", "OrderVerdict", "Relation", "classify", "compare", "kernel_compare",
    "achievable_values",
    "Budget", "bounded_search",
    "hasse", "to_dot",
]
