"""Exception hierarchy shared by all modules."""


class StructuralError(ValueError):
    """Shapes or ambient spaces do not match."""


class DomainError(ValueError):
    """An argument violates a mathematical precondition."""


class NumericalError(ArithmeticError):
    """A floating-point routine did not reach the required accuracy."""


class ConsistencyError(RuntimeError):
    """An internal invariant failed; indicates a bug or a bad normalization."""


class ModeError(ValueError):
    """Exact arithmetic was requested for data that is not exactly representable."""


class NotInSemigroup(DomainError):
    """A recovered cone part is refuted as a member of the maximal cone."""
