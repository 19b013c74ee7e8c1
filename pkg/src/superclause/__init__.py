"""Superredundancy analysis of CNF formulae.

Resolution closure, superredundancy checkers and provers, clause splitting,
brute-force minimization oracles and a SAT to Horn-minimization reduction
generator.
"""

from .cnf import Clause, Formula, Literal, clause, formula, formula_size, parse, serialize, substitute
from .errors import (
    ParseError,
    PreconditionError,
    ResourceLimitError,
    SuperclauseError,
    TautologyError,
)
from .semantics import entails, equivalent, satisfiable

__version__ = "0.1.0"

__all__ = [
    "Clause",
    "Formula",
    "Literal",
    "ParseError",
    "PreconditionError",
    "ResourceLimitError",
    "SuperclauseError",
    "TautologyError",
    "clause",
    "entails",
    "equivalent",
    "formula",
    "formula_size",
    "parse",
    "satisfiable",
    "serialize",
    "substitute",
]
