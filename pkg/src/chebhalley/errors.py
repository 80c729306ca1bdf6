"""Exception types shared across the package."""

from __future__ import annotations


class DegenerateParameter(ValueError):
    """A closed-form landmark does not exist at this family parameter.

    Raised when a requested quantity degenerates (for example the strange
    fixed points escape to infinity, or an operation is only defined for the
    generic operator form).
    """


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NoConvergence(RuntimeError):
    """An iterative solver failed to reach its residual target.

    Attributes
    ----------
    iterates : last set of iterates when the solver gave up (may be None).
    residuals : residuals of those iterates (may be None).
    """

    def __init__(self, message, iterates=None, residuals=None):
        super().__init__(message)
        self.iterates = iterates
        self.residuals = residuals


class BasinEscape(RuntimeError):
    """An orbit left the basin it was required to stay in."""


class IoError(OSError):
    """An image or report could not be written to its destination."""
