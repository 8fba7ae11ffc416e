"""Exception hierarchy shared by all modules."""


class PdxError(Exception):
    """Base class for every error raised by pdxcorr."""


class OddDegree(PdxError, ValueError):
    pass


class NotPrimitive(PdxError, ValueError):
    pass


class FieldMismatch(PdxError, ValueError):
    pass


class NotInSubfield(PdxError, ValueError):
    pass


class NonDivisorDegrees(PdxError, ValueError):
    pass


class DNotCoprime(PdxError, ValueError):
    pass


class NoValidL(PdxError, ValueError):
    pass


class InvariantViolation(PdxError, ValueError):
    pass


class TauOutOfRange(PdxError, ValueError):
    pass


class ANotInSubfield(NotInSubfield):
    pass


class AZero(PdxError, ValueError):
    pass


class LNotNormalized(PdxError, ValueError):
    pass


class HOutOfRange(PdxError, ValueError):
    pass


class MuEven(PdxError, ValueError):
    pass


class NonPowerOfTwoKernel(PdxError, RuntimeError):
    pass


class CensusMismatch(PdxError, AssertionError):
    pass


class BadParameters(PdxError, ValueError):
    pass


class IncompleteSpectrum(PdxError, ValueError):
    pass


class PredictionMismatch(PdxError, AssertionError):
    pass


class MTooLarge(PdxError, ValueError):
    pass
