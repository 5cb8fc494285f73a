"""Exception types shared across the library.

The CLI maps these onto exit codes: validation problems are exit 2,
budget/convergence exhaustion is exit 3, failed verdicts are exit 1.
"""


class InputValidationError(ValueError):
    """Malformed or out-of-contract input (bad matrix, bad JSON, bad params)."""


class NotPSDError(InputValidationError):
    """Matrix is not positive semidefinite within the clipping tolerance."""


class MuTooSmallError(InputValidationError):
    """Parrott completion: mu is below the norm of a given row/column."""


class NotConvexError(InputValidationError):
    """Operator fails the convexity inequality at tolerance."""


class NotContractionError(InputValidationError):
    """Operator norm exceeds 1 beyond tolerance."""


class IntertwiningError(InputValidationError):
    """The hypothesis C*C1 == C0*C fails at tolerance."""


class PowerBoundError(InputValidationError):
    """Operator could not be certified power bounded at the requested constant."""


class BudgetError(RuntimeError):
    """A truncation/exactness/iteration budget was exceeded."""


class GrowthDivergenceError(BudgetError):
    """No finite growth constant at the requested exponent (trend diverging)."""


class EmbeddingMarginError(BudgetError):
    """The Neumann-series margin q >= 1/2; the isometric embedding solve is off contract."""


class ConvergenceError(BudgetError):
    """Fixed-point iteration did not converge within its budget."""
