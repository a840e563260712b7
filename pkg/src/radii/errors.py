"""Exception hierarchy shared by all radii modules."""


class RadiiError(Exception):
    """Base class for every error raised by this package."""


class InvalidSpec(RadiiError, ValueError):
    """Family parameters or normalization outside their admissible range."""


class InvalidProblem(InvalidSpec):
    """A radius query lies outside the admissible parameter range."""


class NumericalFailure(RadiiError, ArithmeticError):
    """Base class for failures of a numerical procedure on a valid input."""


class NonConvergence(NumericalFailure):
    """A series did not reach its tolerance within ``max_terms`` terms."""


class PoleAtZero(NumericalFailure):
    """A ratio was evaluated at (numerically) a zero of its denominator."""


class NoSignChange(NumericalFailure):
    """A scan finished without locating a sign change."""


class BracketFailure(NumericalFailure):
    """Endpoint signs of a radius equation do not differ."""


class CapReached(NumericalFailure):
    """The brute-force scan reached the domain cap without a violation."""


class CertificationFailure(RadiiError):
    """A certificate check failed.

    Attributes:
        face: which check failed (``"inner"``, ``"outer"`` or ``"oracle"``).
        certificate: the partially filled certificate, if one was assembled.
    """

    def __init__(self, face, message, certificate=None):
        super().__init__(f"{face}: {message}")
        self.face = face
        self.certificate = certificate
