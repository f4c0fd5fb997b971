"""Exception types raised by the design and evaluation routines."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class InfeasibleDesign(DomainError):
    """The requested (N, L) pair cannot give every segment a cell."""


class InvalidDesign(DomainError):
    """The approximating density is not strictly positive on the support."""
