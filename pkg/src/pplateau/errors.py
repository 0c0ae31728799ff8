"""Exception hierarchy shared across the package.

DomainError covers mathematically invalid inputs or infeasible problems;
ParseError covers malformed files. The CLI maps DomainError to exit code 1
and ParseError / OSError to exit code 2.
"""


class PPlateauError(Exception):
    """Base class for all package errors."""


class DomainError(PPlateauError):
    """Input violates a mathematical precondition, or a problem is infeasible."""


class ParseError(PPlateauError):
    """A file or literal does not conform to its format."""


class SearchSpaceError(DomainError):
    """An enumeration or search space is unbounded or too large to visit."""


class DegenerateSliceError(DomainError):
    """A slicing plane hits a simplex non-transversally or on a facet."""
