"""Exception types raised across the package."""


class SelfSimError(Exception):
    """Base class for all package errors."""


class ZeroVector(SelfSimError, ValueError):
    pass


class AxisSingularity(SelfSimError, ValueError):
    """A cot(phi) or 1/sin(phi) term was required on the symmetry axis."""


class StepTooLarge(SelfSimError, ValueError):
    pass


class DomainError(SelfSimError, ValueError):
    pass


class NoBracket(SelfSimError, RuntimeError):
    pass


class ZeroForce(SelfSimError, ValueError):
    pass


class OutOfDomain(SelfSimError, ValueError):
    pass


class GNotZero(SelfSimError, ValueError):
    """Navier-slip comparison requested for a profile with u.n != 0."""


class BlowUp(SelfSimError, RuntimeError):
    def __init__(self, phi, message=None):
        self.phi = phi
        super().__init__(message or f"state exceeded blow-up threshold at phi={phi:.6g}")


class StiffnessFailure(SelfSimError, RuntimeError):
    pass


class NoConvergence(SelfSimError, RuntimeError):
    pass


class TrivialProfile(SelfSimError, ValueError):
    pass


class ExclusionViolation(SelfSimError, ValueError):
    pass
