"""Exception types raised across the package."""


class MalformedAlgebraError(ValueError):
    """Structural data of an algebra is inconsistent (not an axiom failure)."""


class AlgebraMismatchError(ValueError):
    """Operands belong to different algebras."""


class SingularFactorError(ValueError):
    """A triangular factor has a non-positive diagonal scalar."""


class NotTransportableError(ValueError):
    """A transport endpoint is not an interior point of the cone."""


class DomainError(ValueError):
    """Input lies outside the domain of a map (e.g. a non-Hermitian element)."""


class OutOfScopeError(ValueError):
    """The request is outside what the routine handles (e.g. rank > 2)."""


class InvalidExponentError(ValueError):
    """A p-norm exponent below 1."""


class UnderdeterminedError(ValueError):
    """Too few complementarity pairs to pin down a Lyapunov system."""


class AmbiguousRankError(RuntimeError):
    """Singular value gap too small to decide a nullity.

    The offending :class:`~homcone.lyaprank.LyapunovSystem` is kept on
    ``self.system`` for inspection.
    """

    def __init__(self, message, system=None):
        super().__init__(message)
        self.system = system


class DescriptorParseError(ValueError):
    """A descriptor or element file could not be parsed.

    ``location`` is either ``"line N"`` or a field path such as
    ``"products[3].coeff"``.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
