"""Exception types shared across the package.

Each carries the CLI exit code it maps to.
"""


class TwoDigitError(Exception):
    exit_code = 1


class ValidationError(TwoDigitError, ValueError):
    """Input violates a documented precondition."""

    exit_code = 2


class BudgetError(TwoDigitError):
    """A size or work budget would be exceeded."""

    exit_code = 3


class CriteriaDisagreement(TwoDigitError):
    """Two independent criteria returned different verdicts."""

    exit_code = 4
