"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: domain failures exit 1, usage and parse
problems exit 2, resource guards exit 3.
"""

from __future__ import annotations


class LpeccError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ParameterError(LpeccError, ValueError):
    """Parameters violate an operation's precondition."""

    exit_code = 2


class DimensionError(ParameterError):
    """Codewords of different length or alphabet were combined."""


class ParseError(ParameterError):
    """A code or design file is malformed."""


class ResourceError(LpeccError):
    """A named scale guard was exceeded."""

    exit_code = 3

    def __init__(self, limit_name: str, limit: int, actual: int):
        self.limit_name = limit_name
        self.limit = limit
        self.actual = actual
        super().__init__(f"scale guard {limit_name} exceeded: {actual} > {limit}")


class ExistenceError(LpeccError):
    """An exhaustive search found no object with the requested properties."""


class AdmissibilityError(LpeccError):
    """A design is not known to exist for these parameters."""


class StructureError(LpeccError):
    """An input lacks a structure that its size forces."""


class InternalError(LpeccError):
    """A construction produced an invalid object; indicates a bug."""
