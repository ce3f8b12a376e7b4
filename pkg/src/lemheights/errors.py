"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to, so the front end never has
to keep a second table in sync.
"""


class LemHeightsError(Exception):
    exit_code = 1

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context


class InputError(LemHeightsError, ValueError):
    """Malformed input: unparsable polynomial, zero polynomial, bad knob."""

    exit_code = 2


class DegenerateError(InputError):
    """Both resultant arguments are constants."""


class HypothesisError(LemHeightsError):
    """A theorem's hypotheses do not hold for the requested check."""

    exit_code = 3


class ResourceCapError(LemHeightsError):
    exit_code = 4


class ConvergenceError(LemHeightsError, ArithmeticError):
    """Root finding hit its iteration cap with corrections above tolerance."""


class SingularIntegrandError(LemHeightsError, ArithmeticError):
    """log|P| quadrature refused: a root of P sits on (or too near) the curve."""


class StepTooCoarseError(LemHeightsError):
    """Branch matching on the theta grid is ambiguous; use a finer grid."""


class IndexExhaustedError(LemHeightsError):
    """No cyclotomic divisor found up to the configured index."""
