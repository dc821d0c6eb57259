"""Exception types raised by the numeric layers."""


class FracGreenError(Exception):
    """Base class for all library errors."""


class GammaPoleError(FracGreenError, ValueError):
    """Gamma function evaluated at a non-positive integer."""

    def __init__(self, n, where=""):
        self.n = n
        msg = f"gamma pole at {n}"
        if where:
            msg += f" ({where})"
        super().__init__(msg)


class SingularityError(FracGreenError, ValueError):
    """Evaluation point sits on a genuine singularity of the function."""


class ConditionsViolated(FracGreenError):
    """An H-function spec fails the pole conditions needed by an expansion."""

    def __init__(self, violations):
        self.violations = list(violations)
        names = sorted({v.condition for v in self.violations})
        super().__init__("conditions violated: " + ", ".join(names))


class NoConvergence(FracGreenError, ArithmeticError):
    """A series or quadrature failed to reach the requested tolerance."""


class PrecisionBudgetExceeded(NoConvergence):
    """Cancellation would need more working digits than the allowed budget."""


class InapplicableExpansion(FracGreenError, ValueError):
    """An expansion's preconditions (e.g. Delta* = 0) do not hold."""


class RegimeWarning(UserWarning):
    """Asymptotic formula used outside its regime of validity."""


class FarFieldViolation(FracGreenError, ValueError):
    """Far-field formula requested too close to the potential."""


class UnderResolved(FracGreenError, ValueError):
    """Quadrature grid too coarse for the oscillation it must integrate."""
