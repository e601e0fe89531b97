"""Exception types shared across the toolkit.

Input/domain problems subclass ValueError; numerical failures subclass
ArithmeticError so callers (and the CLI) can distinguish "bad request"
from "computation broke down".
"""


class CapacityError(ValueError):
    """A combinatorial table was asked for an index beyond its limit."""


class EmptyRangeError(ValueError):
    """No admissible branch indices exist for the given parameters."""


class BranchIndexError(ValueError):
    """A branch index that is excluded by construction (k = 0)."""


class RegimeError(ArithmeticError):
    """The argument is outside the proven domain of the series expansion."""


class ConvergenceError(ArithmeticError):
    """An iteration or series summation failed to converge."""


class BranchJumpError(ConvergenceError):
    """An iteration converged, but onto the wrong branch."""


class ExponentOverflowError(OverflowError):
    """An exponential would overflow double precision; refuse to evaluate."""


class PoleError(ZeroDivisionError):
    """Evaluation requested exactly at a pole of the formula."""
