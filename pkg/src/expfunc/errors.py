"""Exception hierarchy shared by all expfunc modules.

Domain/gate violations and convergence failures are kept apart so the CLI
can map them to distinct exit codes (2 and 3 respectively).
"""


class ExpfuncError(Exception):
    """Base class for all library errors."""


class GateViolation(ExpfuncError):
    """Base for precondition / domain / gate errors (CLI exit code 2)."""


class NumericalFailure(ExpfuncError):
    """Base for convergence / budget-exhaustion errors (CLI exit code 3)."""


# -- gate / domain errors ---------------------------------------------------

class DomainError(GateViolation):
    """Argument outside the analyticity or definition domain."""


class ExistenceError(GateViolation):
    """The exponential functional is infinite a.s. (phi_minus(0) = 0)."""


class StripError(GateViolation):
    """Mellin argument outside the analyticity strip."""


class BoundaryError(GateViolation):
    """Mellin transform does not extend continuously to this boundary."""


class MomentInfiniteError(GateViolation):
    """Requested moment is infinite."""


class SmoothnessError(GateViolation):
    """Derivative order exceeds what the smoothness index permits."""


class RadiusError(GateViolation):
    """Series argument outside its radius of convergence."""


class RegimeError(GateViolation):
    """Asymptotic series requested outside its validity regime."""


class CramerPreconditionError(GateViolation):
    """Cramer tail requires a finite negative zero with finite slope."""


class ConditionHError(GateViolation):
    """Saddle asymptotics require limsup x phi'(x)/phi(x) < 1."""


class CaseError(GateViolation):
    """No convolution-equivalence case applies to this model."""


class GateError(GateViolation):
    """Generic small-x theorem gate failure."""


class MissingDataError(GateViolation):
    """Family does not supply an analytically required quantity."""


class UnsupportedFamilyError(GateViolation):
    """Operation has no implementation for this family."""


class HorizonError(GateViolation):
    """Simulation horizon leaves a non-negligible tail."""


class PoleError(GateViolation):
    """Evaluation requested at a pole of the meromorphic continuation."""


# -- numerical failures -----------------------------------------------------

class QuadratureError(NumericalFailure):
    """Adaptive quadrature could not reach tolerance within the panel budget."""


class ToleranceError(NumericalFailure):
    """Root bracketing / bisection could not reach the bit budget."""


class ConvergenceError(NumericalFailure):
    """Series or product truncation budget exhausted."""


class TruncationError(NumericalFailure):
    """Contour truncation cap insufficient for the target tolerance."""


class RootBracketError(NumericalFailure):
    """Expected sign change absent in a predicted root interval."""


# -- warnings ---------------------------------------------------------------

class DivergenceWarning(UserWarning):
    """Series terms grow before the asymptotic regime sets in."""


class PoleWarning(UserWarning):
    """Evaluation close to a zero of Psi; result may lose accuracy."""
