"""Exception hierarchy shared by every module.

The CLI maps :class:`DomainError` (and subclasses) to exit status 2 and
:class:`NumericalFailure` (and subclasses) to exit status 3.
"""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class PreconditionError(DomainError):
    """A documented precondition of an operation does not hold."""


class UnsupportedError(DomainError):
    """Requested case has no implementation (e.g. closed form for N >= 3)."""


class NumericalFailure(RuntimeError):
    """A numerical procedure could not deliver a trustworthy answer."""

    def __init__(self, message, last_good=None):
        super().__init__(message)
        self.last_good = last_good


class AccuracyError(NumericalFailure):
    """Discretisation is too coarse for the requested accuracy."""


class SingularityError(NumericalFailure):
    """Integration ran into a singular point or a step-size floor."""


class BranchError(NumericalFailure):
    """A square-root radicand is negative beyond tolerance (wrong branch)."""


class SeedError(NumericalFailure):
    """Newton inversion of a parametrisation did not converge."""
