"""Exception hierarchy shared by every module of the package."""


class NormcatError(Exception):
    """Base class for all errors raised by normcat."""


class ValidationError(NormcatError, ValueError):
    """Input data does not describe the structure it claims to."""


class MalformedTable(ValidationError):
    pass


class NoIdentity(ValidationError):
    pass


class NotAssociative(ValidationError):
    pass


class NoInverse(ValidationError):
    pass


class NotAHomomorphism(ValidationError):
    pass


class NotASubgroup(ValidationError):
    pass


class AmbientMismatch(ValidationError):
    pass


class NotNormal(ValidationError):
    pass


class NotReflexive(ValidationError):
    pass


class NotSurjective(ValidationError):
    pass


class NotSplit(ValidationError):
    pass


class CodomainMismatch(ValidationError):
    pass


class NotCommuting(ValidationError):
    pass


class NotCartesianInput(ValidationError):
    pass


class NoFactorization(NormcatError):
    pass


class FactorizationMissing(NormcatError):
    """A factorization guaranteed by theory was not found (a real bug signal)."""


class NotStable(ValidationError):
    pass


class NotSubgroup(ValidationError):
    pass


class ConditionBFails(NormcatError):
    pass


class ParseError(ValidationError):
    pass


class UnknownSuite(NormcatError, KeyError):
    pass


class RouteMismatch(NormcatError):
    """Two independent computations of the same object disagree."""


class CatalogInsufficient(NormcatError):
    """A catalog-bounded check disagrees with the exact criterion."""
