"""Exception types shared across the package."""


class RittLabError(Exception):
    """Base class for all package errors."""


class SingularResolvent(RittLabError):
    """The linear solve for (lambda I - T) detected rank deficiency."""


class NonConvergence(RittLabError):
    """An iteration failed to stabilize within its budget."""


# Quadrature refinement shares semantics with iterative non-convergence but
# is raised by contour/quadrature code paths.
NoConvergence = NonConvergence


class DimensionCap(RittLabError):
    """Matrix dimension exceeds the configured cap for dense spectral work."""


class IllConditioned(RittLabError):
    """Eigenvector matrix too ill-conditioned for the requested operation."""


class IllConditionedWarning(UserWarning):
    """Eigenvector condition number is large; results may lose accuracy."""


class OutOfRange(RittLabError):
    """Argument outside the documented domain of the operation."""


class PoleOnDomain(RittLabError):
    """A pole certificate failed: the function is not holomorphic there."""


class NotAdmissible(RittLabError):
    """f(z)/(1-z) is not integrable on the contour."""


class SpectrumOutsideContour(RittLabError):
    """The spectrum is not strictly inside the integration contour."""


class NotRegularizable(RittLabError):
    """(I - T) is numerically singular; Cayley regularization unavailable."""


class NonSemisimple(RittLabError):
    """The eigenvalue-1 cluster has a defective Jordan structure."""


class NoDecay(RittLabError):
    """Sequence entries admit no geometric decay certificate."""


class TailBoundFailure(RittLabError):
    """Truncation budget cannot push the series tail below the target."""


class BadParameters(RittLabError):
    """Generator parameters outside their documented ranges."""


class EmptyFamily(RittLabError):
    """An operator family argument was empty."""
