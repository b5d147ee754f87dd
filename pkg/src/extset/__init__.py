"""Computational extremal set theory: families, shifting, separated families and oracles."""

from .errors import (
    ElementRangeError,
    ExtsetError,
    GroundSizeError,
    InternalConsistencyError,
    ParseError,
    PreconditionError,
)
from .family import Family, parse_family, relative_complement, restrict, serialize

__version__ = "0.1.0"

__all__ = [
    "ElementRangeError",
    "ExtsetError",
    "Family",
    "GroundSizeError",
    "InternalConsistencyError",
    "ParseError",
    "PreconditionError",
    "parse_family",
    "relative_complement",
    "restrict",
    "serialize",
]
