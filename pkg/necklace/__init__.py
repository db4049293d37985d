"""Lambek calculus with cyclic shift: provers, transformations and semantics."""

from necklace.formula import Sequent, SystemId, parse_formula, parse_sequent, print_formula, print_sequent
from necklace.search import SearchConfig, Searcher, derive

__version__ = "1.0"

__all__ = [
    "SearchConfig",
    "Searcher",
    "Sequent",
    "SystemId",
    "derive",
    "parse_formula",
    "parse_sequent",
    "print_formula",
    "print_sequent",
]
