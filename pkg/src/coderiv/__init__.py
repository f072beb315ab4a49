"""Exact coderivation calculus for Z2-graded associative algebras."""

from .coderivations import (
    Coderivation,
    ParseError,
    ParityError,
    bracket,
    coboundary,
    compose,
    evaluate,
    is_codifferential,
    parse_coderivation,
    term_parity,
)
from .cohomology import cohomology_basis, cohomology_dims, coboundary_matrix, solve_coboundary
from .graded_space import V21, GradedSpace, cochain_dims, enumerate_words, word_parity
from .scalars import Polynomial, normalize, poly_evaluate, poly_truncate

__version__ = "0.1.0"

__all__ = [
    "Coderivation",
    "GradedSpace",
    "ParseError",
    "ParityError",
    "Polynomial",
    "V21",
    "bracket",
    "coboundary",
    "coboundary_matrix",
    "cochain_dims",
    "cohomology_basis",
    "cohomology_dims",
    "compose",
    "enumerate_words",
    "evaluate",
    "is_codifferential",
    "normalize",
    "parse_coderivation",
    "poly_evaluate",
    "poly_truncate",
    "solve_coboundary",
    "term_parity",
    "word_parity",
]
