"""Exceptions raised by the certification lab.

Every error the lab raises derives from ``BerezinLabError``. Errors caused by
bad input values also derive from ``ValueError`` so generic callers can catch
them without importing this module.
"""

import functools

import numpy as np


class BerezinLabError(Exception):
    """Base class for all lab errors."""


class InvalidGridError(BerezinLabError, ValueError):
    """Grid descriptor is empty, has repeated points, or leaves the disc."""


class ModelGridMismatchError(BerezinLabError, ValueError):
    """The grid kind cannot be used with the requested kernel model."""


class IndexOutOfRangeError(BerezinLabError, IndexError):
    """Grid index outside the sampled domain."""


class DimensionMismatchError(BerezinLabError, ValueError):
    """Operator / vector / space dimensions are incompatible."""


class NumericFailureError(BerezinLabError, ArithmeticError):
    """An eigen/singular solver did not converge or produced non-finite output."""


class NotPositiveSemidefiniteError(BerezinLabError, ValueError):
    """A PSD operator was required but an eigenvalue is below the clamping threshold."""


class PairViolationError(BerezinLabError, ValueError):
    """A function pair does not satisfy f(t)g(t) = t on the spectrum it is applied to."""


class ParameterDomainError(BerezinLabError, ValueError):
    """Theorem parameters (p, alpha, beta, ...) are outside their admissible range."""


class ConfigError(BerezinLabError, ValueError):
    """Run configuration is invalid; raised before any suite runs."""


class ReportIOError(BerezinLabError, OSError):
    """A report could not be written."""


def numeric_guard(func):
    """Decorator turning LAPACK failures into NumericFailureError."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except np.linalg.LinAlgError as exc:
            raise NumericFailureError(f"{func.__name__}: {exc}") from exc

    return wrapper
