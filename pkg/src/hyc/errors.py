"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class TailDivergenceError(DomainError):
    """The analytic tail bound of a line integral is not integrable."""


class NotApplicableError(ValueError):
    """A check cannot be run on the given input (e.g. infinite Carleson norm)."""


class UnsupportedMeasureError(ValueError):
    """The measure contains components the requested operation cannot handle exactly."""
