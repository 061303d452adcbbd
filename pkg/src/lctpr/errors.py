"""Exception hierarchy shared by all lctpr modules."""


class LctError(Exception):
    """Base class for all library errors."""


class DeterminantError(LctError, ValueError):
    """Raised when ``a*d - b*c`` differs from one."""


class DegenerateParameterError(LctError, ValueError):
    """Raised when a transform is requested with ``b == 0``."""


class QuadratureError(LctError, ValueError):
    """Raised when a quadrature rule has too few nodes."""


class DegenerateError(LctError, ValueError):
    """Raised when an autocorrelation has a vanishing end coefficient."""


class ConvergenceError(LctError, ArithmeticError):
    """Raised when the polynomial root iteration does not converge."""


class PairingError(LctError, ValueError):
    """Raised when roots cannot be organised into conjugate-reciprocal pairs."""


class ZeroRootError(LctError, ValueError):
    """Raised when a selected root is (numerically) zero."""


class SingularSystemError(LctError, ArithmeticError):
    """Raised when intensity samples do not determine the trigonometric polynomial."""
