"""Exact homology of path pairs: quivers, digraphs, subsets of groups and submodules of algebras."""

from .errors import (
    InvariantBreach,
    ParseError,
    PathHomError,
    ValidationError,
)
from .exactalg import ExactMatrix, HomologyGroup, Ring

__all__ = [
    "ExactMatrix",
    "HomologyGroup",
    "InvariantBreach",
    "ParseError",
    "PathHomError",
    "Ring",
    "ValidationError",
]

__version__ = "0.1.0"
