"""Exception types raised across the package."""


class TwwGeoError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""


class MalformedInput(TwwGeoError):
    pass


class InvalidVertex(MalformedInput):
    pass


class InvalidPartition(MalformedInput):
    pass


class InvalidMerge(MalformedInput):
    pass


class LengthMismatch(MalformedInput):
    pass


class TooLarge(TwwGeoError):
    pass


class EmptyInput(MalformedInput):
    pass


class OddOrder(MalformedInput):
    pass


class InvalidWitness(MalformedInput):
    pass


class MissingColor(MalformedInput):
    pass


class NotBlockStructured(MalformedInput):
    pass


class BadBlockSequence(MalformedInput):
    pass


class WrongGraph(TwwGeoError):
    """A construction sequence does not build the graph it claims to."""


class InconsistentResolve(TwwGeoError):
    pass


class PathTooShort(MalformedInput):
    pass


class NotMinimized(TwwGeoError):
    pass


class GridTooSmall(TwwGeoError):
    def __init__(self, msg, achievable_k=0):
        super().__init__(msg)
        self.achievable_k = achievable_k


class EmptyCell(MalformedInput):
    pass


class StructureMismatch(TwwGeoError):
    pass


class NotBipartite(MalformedInput):
    pass


class NotATerrain(MalformedInput):
    pass


class PrecisionExhausted(TwwGeoError):
    def __init__(self, msg, denominator=None):
        super().__init__(msg)
        self.denominator = denominator
