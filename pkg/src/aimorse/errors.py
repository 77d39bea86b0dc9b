"""Exception types shared across the package."""


class AimorseError(Exception):
    """Base class for all errors raised by this package."""


class ModeMismatchError(AimorseError, TypeError):
    """Exact and numeric scalars were mixed in one computation."""


class PoleError(AimorseError, ZeroDivisionError):
    """Evaluation requested at a pole (u = 0 with negative exponents present)."""


class DegenerateInputError(AimorseError, ValueError):
    """An input is degenerate for the requested operation (e.g. the zero polynomial)."""


class BracketError(AimorseError, ValueError):
    """A root-finding bracket does not enclose a sign change."""


class ConvergenceError(AimorseError):
    """Iteration failed to converge; ``partial`` carries whatever was obtained."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial if partial is not None else []


class LevelCountError(ConvergenceError):
    """Fewer eigenvalue roots were found than levels requested."""


class TerminationError(AimorseError, ValueError):
    """A power series expected to terminate did not."""


class QuadratureError(AimorseError):
    """Numerical integration failed to reach the requested tolerance."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class UnitsUnavailableError(AimorseError, ValueError):
    """Physical unit conversion requested on a dimensionless-only model."""
