"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: ``InputError`` (and plain ``ValueError``)
exit 1, ``NotApplicable`` exit 2, everything else is a hard failure.
"""


class CurvextError(Exception):
    """Base class for all package errors."""


class InputError(CurvextError, ValueError):
    """Malformed or mathematically invalid input (bad field, degree, JSON, ...)."""


class NotApplicable(CurvextError):
    """A hypothesis gate failed; the requested quantity is not defined here."""


class MembershipError(CurvextError):
    """A function was asserted to lie in a section space but does not."""


class PrecisionExceeded(CurvextError):
    """A local expansion hit the hard precision cap without certifying a term."""


class ExhaustionError(CurvextError):
    """A complete search ran out of candidates that theory says must exist."""
