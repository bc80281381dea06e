"""Exception hierarchy shared by every ellip module."""


class EllipError(Exception):
    """Base class for all errors raised by ellip."""


class DegenerateEquation(EllipError, ValueError):
    """Both leading coefficients of the characteristic equation vanish."""


class Inconclusive(EllipError):
    """A characteristic root lies too close to the real axis to certify ellipticity."""

    def __init__(self, message, roots=None):
        super().__init__(message)
        self.roots = roots


class DimensionMismatch(EllipError, ValueError):
    """Sample arrays or fields do not match the polar grid."""


class ModeOverflow(EllipError, ValueError):
    """Data carries angular modes beyond the grid's retained band."""


class DerivativeVanishes(EllipError, ValueError):
    """The conformal map derivative is (numerically) zero somewhere on the grid."""


class SampleCountMismatch(EllipError, ValueError):
    """Boundary samples do not match the requested angular sample count."""


class NotUnivalent(EllipError, ValueError):
    """A conformal map failed the sampled univalence check."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NonContractive(EllipError, RuntimeError):
    """The perturbation series stopped contracting (tau times decay ratio >= 1)."""
