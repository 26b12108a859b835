"""Exception hierarchy shared by every module.

All errors derive from ``IntransitiveError`` (itself a ``ValueError``) so the
CLI can map contract violations to exit status 2 with a single ``except``.
"""


class IntransitiveError(ValueError):
    pass


# relations
class DuplicatePair(IntransitiveError):
    pass


class SelfDuel(IntransitiveError):
    pass


# dice
class CopiesOutOfRange(IntransitiveError):
    pass


class DuplicateLabel(IntransitiveError):
    pass


class TooFewItems(IntransitiveError):
    pass


class RaggedMatrix(IntransitiveError):
    pass


class SpecInvalid(IntransitiveError):
    pass


class KOutOfRange(IntransitiveError):
    pass


# voting
class MalformedBallot(IntransitiveError):
    pass


class RowsOutOfRange(IntransitiveError):
    pass


# gears
class SlotCountMismatch(IntransitiveError):
    pass


class UnknownShaftInAdjacency(IntransitiveError):
    pass


class ChainTooShort(IntransitiveError):
    pass


class OverConstrained(IntransitiveError):
    pass


class MissingPulley(IntransitiveError):
    pass


class MultipleMeshes(IntransitiveError):
    pass


class PulleyMismatch(IntransitiveError):
    pass


# duels
class LaneCountMismatch(IntransitiveError):
    pass


# cli / io
class UnknownDemo(IntransitiveError):
    pass


class BadOption(IntransitiveError):
    pass


class ParseError(IntransitiveError):
    pass


class SchemaViolation(IntransitiveError):
    pass
