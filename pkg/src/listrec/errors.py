"""Exception types raised across the package."""


class ListRecError(Exception):
    """Base class for all package errors."""


class NonPrimeCharacteristic(ListRecError, ValueError):
    pass


class ReducibleModulus(ListRecError, ValueError):
    pass


class FieldTooLarge(ListRecError, ValueError):
    pass


class InvertZero(ListRecError, ZeroDivisionError):
    pass


class MixedFields(ListRecError, ValueError):
    pass


class DimensionMismatch(ListRecError, ValueError):
    pass


class InvalidRate(ListRecError, ValueError):
    pass


class EnumerationTooLarge(ListRecError, ValueError):
    pass


class EmptyLambda(ListRecError, ValueError):
    pass


class EllExceedsField(ListRecError, ValueError):
    pass


class SearchTooLarge(ListRecError, ValueError):
    pass


class HypothesisViolated(ListRecError, ValueError):
    pass


class DomainError(ListRecError, ValueError):
    pass


class ConstraintViolated(ListRecError, ValueError):
    pass


class DuplicateVectors(ListRecError, ValueError):
    pass
