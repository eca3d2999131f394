"""Exception types shared across the package."""


class CorrColorError(Exception):
    """Base class for all package errors."""


class InputError(CorrColorError):
    """Malformed input: bad vertices, bad colors, unparsable files."""


class BudgetExceededError(CorrColorError):
    """An exact search ran out of its node/item budget.

    Deliberately distinct from a negative mathematical outcome such as
    "no coloring exists".
    """


class HypothesisViolation(CorrColorError):
    """A structural or list-size hypothesis of a constructive routine fails.

    Raised before any work is attempted; the message names the failed
    precondition.
    """


class InternalColorerError(CorrColorError):
    """A constructive coloring step failed although its hypotheses held.

    This is always a defect, never an expected outcome.
    """
