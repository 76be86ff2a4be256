"""Exception hierarchy shared by all modules."""


class StrataError(Exception):
    """Base class for every error raised by this package."""


class MalformedTrack(StrataError):
    pass


class DimensionMismatch(StrataError):
    pass


class EulerMismatch(StrataError):
    pass


class NonIntegerBound(StrataError):
    pass


class OddParity(StrataError):
    pass


class SignatureParseError(StrataError, ValueError):
    pass


class MalformedConfiguration(StrataError):
    pass


class RegionsNotDistinct(StrataError):
    pass


class IncompatibleGluing(StrataError):
    pass


class UnknownBlock(StrataError, KeyError):
    pass


class BadParity(StrataError, ValueError):
    pass


class MixedParity(StrataError, ValueError):
    pass


class EulerViolation(StrataError, ValueError):
    pass


class ParityViolation(StrataError, ValueError):
    pass


class ExceptionalSignature(StrataError, ValueError):
    pass


class NotCoadjacent(StrataError):
    pass


class UnintersectedCurve(StrataError):
    pass


class NoOneProng(StrataError):
    pass


class CollapseObstruction(StrataError):
    pass


class RankDeficient(StrataError):
    pass


class ScheduleOverflow(StrataError):
    pass


class NumericUnderflow(StrataError):
    pass
