"""
Exception hierarchy for rieszcrit.

Every error carries the exit code the command line front end reports for it;
failed bound checks are not errors (they come back as BoundReport objects).
"""


class RieszError(Exception):
    exit_code = 1


class DomainError(RieszError, ValueError):
    """An argument lies outside the domain of the operation."""
    exit_code = 2


class PoleError(DomainError):
    """Evaluation requested at the pole of zeta, s = 1."""


class BracketError(DomainError):
    """A root bracket without a sign change."""


class ResourceError(RieszError):
    """
    The Moebius table (or another bounded resource) is too small.

    'needed' is the size that would satisfy the request, when known.
    """
    exit_code = 3

    def __init__(self, message, needed=None):
        RieszError.__init__(self, message)
        self.needed = needed


class PrecisionBudgetError(ResourceError):
    """The working precision needed exceeds the configured ceiling."""


class CacheFormatError(RieszError, ValueError):
    exit_code = 2


class FitError(RieszError):
    pass
