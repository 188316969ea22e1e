"""Exception hierarchy for the tsineq package."""


class TsineqError(Exception):
    """Base class for all tsineq errors."""


class PointNotInScale(TsineqError):
    """A queried point does not belong to the time scale."""


class EndpointNotInScale(TsineqError):
    """An integration endpoint does not belong to the time scale."""


class NotDifferentiableHere(TsineqError):
    """The delta derivative is structurally undefined at this point
    (e.g. an isolated maximum with no right neighborhood)."""


class MissingDerivative(TsineqError):
    """A classical derivative is needed on a dense segment but no analytic
    derivative was supplied and finite differencing would leave the scale."""


class QuadratureFailure(TsineqError):
    """Adaptive quadrature could not reach the requested tolerance."""


class DegenerateWindow(TsineqError):
    """The evaluation window [a, b] has a == b."""


class DomainError(TsineqError):
    """An argument lies outside its mathematical domain (e.g. lambda not in [0, 1])."""


class VariantMismatch(TsineqError):
    """A kernel variant was requested with an incompatible weight/parameter setup."""


class HypothesisViolated(TsineqError):
    """The hypotheses of the requested formula do not hold for these inputs
    (e.g. an anchor point is not a scale point)."""


class UnknownCorollary(TsineqError):
    """No corollary evaluator is registered under the given identifier."""


class UnboundedSuspicion(TsineqError):
    """Grid refinement suggests the supremum being estimated is unbounded."""


class EmptyPlan(TsineqError):
    """A sweep plan expands to no scenarios."""


class AllDegenerate(TsineqError):
    """Every scenario in a sharpness search has a vanishing right-hand side."""


class ParseError(TsineqError):
    """A config or descriptor failed to parse.

    Carries the 1-based line number when one is known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(TsineqError):
    """A parsed config or constructed object violates a documented constraint."""
