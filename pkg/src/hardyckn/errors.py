"""Exception types shared across the package."""

from __future__ import annotations


class HardycknError(Exception):
    """Base class for all package-specific errors."""


class HypothesisViolationError(HardycknError):
    """An operation was invoked outside the hypotheses it is valid under.

    Example: the weighted remainder identity requires homogeneous dimension
    Q >= 3, and the alpha = 1 inequality requires Q >= 5.  The CLI maps this
    error to exit code 3 unless the offending case is marked expect-reject.
    """


class IncompatibleNormError(HardycknError):
    """Quasi-norm family incompatible with the dilation structure."""


class QuadratureDomainError(HardycknError):
    """Integration domain violates a quadrature precondition.

    Raised for unbounded integrands (support touching the origin combined
    with a negative weight exponent), for dimension above the cartesian cost
    guard, and for boxes that fail to cover the declared field support.
    """


class QuadratureInconsistencyError(HardycknError):
    """Two routes to the same quantity disagree beyond tolerance."""


class EigensolverError(HardycknError):
    """Eigenvalue iteration failed to converge; carries diagnostics."""

    def __init__(self, message: str, iterations: int | None = None,
                 residual: float | None = None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class ConfigError(HardycknError):
    """Malformed or semantically invalid run configuration.

    The CLI maps this error to exit code 2.  Where possible the message is
    anchored to the offending file location or section/key.
    """
