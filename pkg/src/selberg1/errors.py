"""Exception hierarchy shared by all modules."""


class Selberg1Error(Exception):
    """Base class for every error raised by the package."""


class PoleError(Selberg1Error, ValueError):
    pass


class PrecisionError(Selberg1Error, ArithmeticError):
    pass


class InsufficientData(Selberg1Error, ValueError):
    """A computation needs coefficients beyond the source's ``max_index``."""


class DegreeError(Selberg1Error, ValueError):
    pass


class AxiomViolation(Selberg1Error, ValueError):
    pass


class FitError(Selberg1Error, ArithmeticError):
    pass


class NotPrimitive(Selberg1Error, ValueError):
    pass


class QuadratureBudgetExceeded(Selberg1Error, ArithmeticError):
    pass


class OracleUnavailable(Selberg1Error, LookupError):
    pass


class SupportMismatch(Selberg1Error, ValueError):
    pass


class ConductorMismatch(Selberg1Error, ValueError):
    def __init__(self, q_fe, q_peaks, message=None):
        self.q_fe = q_fe
        self.q_peaks = q_peaks
        super().__init__(
            message
            or f"conductor from functional equation ({q_fe}) disagrees with "
            f"support denominators ({q_peaks})"
        )


class NoMatch(Selberg1Error, LookupError):
    pass


class EvaluationError(Selberg1Error, ArithmeticError):
    pass


class EnvelopeViolation(Selberg1Error, ArithmeticError):
    """A computed value exceeds a bound that holds analytically."""
