"""Exception types shared across the package."""


class NjconstError(Exception):
    """Base class for all njconst errors."""


class DimensionMismatchError(NjconstError, ValueError):
    """A vector or tuple does not match the dimension of its space."""


class DegenerateInputError(NjconstError, ValueError):
    """Input is degenerate, e.g. a zero vector where a direction is needed."""


class UnsupportedExponentError(NjconstError, ValueError):
    """The requested operation is not defined for this norm exponent."""


class CapExceededError(NjconstError, ValueError):
    """The tuple length n exceeds the configured cap."""


class DimensionPreconditionError(NjconstError, ValueError):
    """A closed-form value was requested below its dimension precondition."""


class NoClosedFormError(NjconstError, ValueError):
    """No closed-form value is available for the requested constant."""


class UnsupportedNormError(NjconstError, ValueError):
    """Extreme-point enumeration needs a polyhedral norm (p in {1, inf})."""


class BudgetExceededError(NjconstError, RuntimeError):
    """An enumeration would exceed the configured evaluation budget."""
