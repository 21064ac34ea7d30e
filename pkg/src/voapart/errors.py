"""Exception hierarchy; the CLI maps these classes onto exit codes."""


class VoaError(Exception):
    exit_code = 5


class ShapeError(VoaError, ValueError):
    exit_code = 2


class MathDomainError(VoaError, ValueError):
    """Input outside the domain where the requested quantity is defined."""

    exit_code = 4


class NotInvertibleError(MathDomainError):
    pass


class CompositionError(MathDomainError):
    pass


class LatticeError(MathDomainError):
    pass


class PoleError(MathDomainError):
    pass


class DomainError(MathDomainError):
    pass


class DegenerateMapError(MathDomainError):
    pass


class NotLoxodromicError(MathDomainError):
    pass


class ParabolicError(MathDomainError):
    pass


class BudgetError(VoaError):
    exit_code = 3


class InvariantError(VoaError, AssertionError):
    """An internal consistency check failed (sign convention, nondegeneracy, ...)."""

    exit_code = 5
