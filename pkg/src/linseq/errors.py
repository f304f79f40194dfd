"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateRangeError(DomainError):
    """A plotting or calibration range collapsed to a single value."""


class PreconditionNotMet(Exception):
    """A bound was requested outside the hypotheses under which it holds.

    Not a ``DomainError``: the inputs are valid, the bound simply does not apply.
    """
