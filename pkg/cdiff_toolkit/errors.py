#!/usr/bin/env python3
"""
Errors Module
Exception types raised by the field, function, derivative and search layers
"""


class CDiffError(Exception):
    """Base class for every error raised by cdiff_toolkit"""

    invariant = "cdiff"

    def __init__(self, message, invariant=None):
        super().__init__(message)
        if invariant is not None:
            self.invariant = invariant


class NotPrime(CDiffError):
    invariant = "prime-characteristic"


class NotIrreducible(CDiffError):
    invariant = "irreducible-modulus"


class SizeExceeded(CDiffError):
    invariant = "supported-size"


class InvalidElement(CDiffError):
    invariant = "element-range"


class DivisionByZero(CDiffError, ZeroDivisionError):
    invariant = "nonzero-divisor"


class ExponentOutOfRange(CDiffError):
    invariant = "exponent-range"


class TooManyCoefficients(CDiffError):
    invariant = "coefficient-count"


class InvalidTable(CDiffError):
    invariant = "lookup-table"


class NoSymbolicForm(CDiffError):
    invariant = "symbolic-form"


class OrderTooHigh(CDiffError):
    invariant = "derivative-order"


class FieldMismatch(CDiffError):
    invariant = "same-field"


class ReductionUnavailable(CDiffError):
    invariant = "monomial-reduction"


class PreconditionViolated(CDiffError):
    invariant = "precondition"


class NotQuadraticForm(CDiffError):
    invariant = "quadratic-form"


class ConfigError(CDiffError):
    invariant = "run-config"


class VerificationFailed(CDiffError):
    """A numerical check of a claimed identity or bound did not hold"""

    invariant = "verification"
