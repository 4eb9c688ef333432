"""Exception hierarchy shared by all stablepot modules."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class SingularityError(DomainError):
    """Evaluation requested exactly at a singular point of a kernel."""


class PoleError(DomainError):
    """Evaluation requested at a pole of a special function."""


class ConvergenceError(RuntimeError):
    """A series or quadrature failed to reach the requested tolerance."""


class DivergenceError(ArithmeticError):
    """The requested quantity is genuinely infinite."""


class IntegrabilityError(DivergenceError):
    """A boundary datum fails the integrability condition of its integral."""


class RepresentationError(ValueError):
    """A harmonic representation is incompatible with the requested operation."""
