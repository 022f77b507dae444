"""Exception and warning types shared across the package."""


class DegenerateDelta(ValueError):
    """The shift distribution collapses to a point (sigma = 0 or delta1 = 0).

    Densities and entropies are undefined for a point mass; coherence
    metrics fall back to the pure-state result instead.
    """


class OutOfSupport(ValueError):
    """Argument lies outside the distribution's support."""


class CausticPoint(ValueError):
    """Shift coincides with a critical value of the trajectory.

    The shift density diverges (integrably) there, so no finite value
    can be returned.
    """


class SupportEscape(RuntimeError):
    """Sheared phase-space mass leaked outside the evaluation grid."""


class PoleAtOne(ValueError):
    """Elliptic integral evaluated at its pole (modulus 1, amplitude pi/2)."""


class DomainError(ValueError):
    """Argument outside the function's domain."""


class ConvergenceError(RuntimeError):
    """Doubling the sampling did not stabilize the result within tolerance."""


class ResolutionWarning(UserWarning):
    """Doubling the quadrature nodes changed the result materially."""
