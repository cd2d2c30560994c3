"""
Error types for kgprop.

Validation errors (bad inputs, violated preconditions) derive from
KgpropValidationError; failures of a numerical procedure derive from
KgpropNumericalError. The command-line front end maps the two families to
exit codes 2 and 3.
"""

from typing import Optional


class KgpropError(Exception):
    """
    Base exception for all kgprop errors.

    Attributes:
        message: Human-readable error message.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message

    @property
    def is_validation(self) -> bool:
        """Check if this error reports a violated precondition."""
        return isinstance(self, KgpropValidationError)

    @property
    def is_numerical(self) -> bool:
        """Check if this error reports a numerical failure."""
        return isinstance(self, KgpropNumericalError)

    def __str__(self) -> str:
        return f"{type(self).__name__}: {self.message}"

    def __repr__(self) -> str:
        return f"{type(self).__name__}(message={self.message!r})"


class KgpropValidationError(KgpropError):
    """
    Exception raised for configuration, scenario or input validation errors.

    Attributes:
        message: Human-readable error message.
        field: The field or parameter that failed validation (optional).
    """

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        super().__init__(message)
        self.field = field

    def __str__(self) -> str:
        if self.field:
            return f"{type(self).__name__}: {self.message} (field={self.field})"
        return super().__str__()

    def __repr__(self) -> str:
        return f"{type(self).__name__}(message={self.message!r}, field={self.field!r})"


class KgpropNumericalError(KgpropError):
    """
    Exception raised when a numerical procedure cannot deliver its result.

    Attributes:
        message: Human-readable error message.
        value: The diagnostic quantity that triggered the failure (optional).
    """

    def __init__(self, message: str, value: Optional[float] = None) -> None:
        super().__init__(message)
        self.value = value

    def __str__(self) -> str:
        if self.value is not None:
            return f"{type(self).__name__}: {self.message} (value={self.value:.3e})"
        return super().__str__()

    def __repr__(self) -> str:
        return f"{type(self).__name__}(message={self.message!r}, value={self.value!r})"


# Validation family


class DomainError(KgpropValidationError):
    """Argument lies on a branch cut without a side tag, or outside the domain."""

    def __init__(self, message: str = "Argument outside the domain", field: Optional[str] = None) -> None:
        super().__init__(message, field)


class NotInvolution(KgpropValidationError):
    """Matrix does not square to the identity."""

    def __init__(self, message: str = "Matrix is not an involution", residual: Optional[float] = None) -> None:
        super().__init__(message, field="S")
        self.residual = residual


class PreconditionFailed(KgpropValidationError):
    """Stated precondition of a check does not hold."""

    def __init__(self, message: str = "Precondition failed", field: Optional[str] = None) -> None:
        super().__init__(message, field)


class StabilityRequired(KgpropValidationError):
    """Frequency-split kernel requested for a non-positive spatial operator."""

    def __init__(self, message: str = "Positive definite L required", field: Optional[str] = "L") -> None:
        super().__init__(message, field)


class NotJostAdmissible(KgpropValidationError):
    """Potential has no declared exponential decay, or the mass is below the threshold."""

    def __init__(self, message: str = "Potential is not Jost-admissible", field: Optional[str] = None) -> None:
        super().__init__(message, field)


class OnLightCone(KgpropValidationError):
    """Point pair is null separated; kernels are distributions there."""

    def __init__(self, message: str = "Points are null separated", field: Optional[str] = "Z") -> None:
        super().__init__(message, field)


class ChartBoundary(KgpropValidationError):
    """Point pair lies on the boundary between two charts."""

    def __init__(self, message: str = "Point pair lies on a chart boundary", field: Optional[str] = None) -> None:
        super().__init__(message, field)


class ExcludedParameter(KgpropValidationError):
    """Spectral parameter lies in an excluded set."""

    def __init__(self, message: str = "Excluded spectral parameter", field: Optional[str] = "nu") -> None:
        super().__init__(message, field)


class OnSpectrum(KgpropValidationError):
    """Resolvent requested at a point of the spectrum."""

    def __init__(self, message: str = "Spectral parameter lies on the spectrum", field: Optional[str] = "nu") -> None:
        super().__init__(message, field)


class OverlapZero(KgpropValidationError):
    """Two vacuum parameters with 1 - conj(beta) * alpha = 0."""

    def __init__(self, message: str = "Vacuum overlap vanishes", field: Optional[str] = "alpha") -> None:
        super().__init__(message, field)


# Numerical family


class NonConvergent(KgpropNumericalError):
    """Series or transformation chain did not reach the requested accuracy."""

    def __init__(self, message: str = "Evaluation did not converge", achieved_error: Optional[float] = None) -> None:
        super().__init__(message, achieved_error)
        self.achieved_error = achieved_error


class SolverDiverged(KgpropNumericalError):
    """ODE integration failed."""

    def __init__(self, message: str = "ODE integration failed") -> None:
        super().__init__(message)


class DecayTooSlow(KgpropNumericalError):
    """Matching window would exceed the configured cap."""

    def __init__(self, message: str = "Matching window exceeds the cap", window: Optional[float] = None) -> None:
        super().__init__(message, window)
        self.window = window


class InconsistentWronskian(KgpropNumericalError):
    """Wronskian evaluations at different points disagree."""

    def __init__(self, message: str = "Wronskian is not constant", spread: Optional[float] = None) -> None:
        super().__init__(message, spread)
        self.spread = spread


class BoundStateHit(KgpropNumericalError):
    """Jost function vanishes: the resolvent has a pole at this k."""

    def __init__(self, message: str = "Jost function vanishes", jost_value: Optional[complex] = None) -> None:
        super().__init__(message, None if jost_value is None else abs(jost_value))
        self.jost_value = jost_value


class IllConditionedMatch(KgpropNumericalError):
    """Matching system for scattering data is ill conditioned."""

    def __init__(self, message: str = "Matching system is ill conditioned", condition: Optional[float] = None) -> None:
        super().__init__(message, condition)
        self.condition = condition


class NotComplementary(KgpropNumericalError):
    """Upsilon is singular: the two subspaces are not complementary."""

    def __init__(self, message: str = "Subspaces are not complementary", condition: Optional[float] = None) -> None:
        super().__init__(message, condition)
        self.condition = condition


class OnePlusKSingular(KgpropNumericalError):
    """1 + K is singular, so the angular operators are undefined."""

    def __init__(self, message: str = "1 + K is singular") -> None:
        super().__init__(message)


class ZeroModePresent(KgpropNumericalError):
    """Asymptotic generator has a zero eigenvalue."""

    def __init__(self, message: str = "Asymptotic generator has a zero mode", eigenvalue: Optional[float] = None) -> None:
        super().__init__(message, eigenvalue)


class DegenerateParams(UserWarning):
    """Parameters sit near an integer degeneracy and a limit procedure was used."""
