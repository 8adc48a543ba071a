"""Exception hierarchy shared by every module of the package."""


class ConfSpaceError(ValueError):
    """Base class for all errors raised by confspace."""


class MalformedGraph(ConfSpaceError):
    pass


class UnknownVertex(ConfSpaceError, KeyError):
    pass


class UnknownEdge(ConfSpaceError, KeyError):
    pass


class ZeroParts(ConfSpaceError):
    pass


class Disconnected(ConfSpaceError):
    pass


class HypothesisViolated(ConfSpaceError):
    """The input graph falls outside the range where a statement applies."""


class NotACycle(ConfSpaceError):
    pass


class NonAdjacentEdges(ConfSpaceError):
    pass


class SolveFailure(ConfSpaceError):
    """An exact linear solve that must succeed did not; an internal invariant broke."""


class BadRotation(ConfSpaceError):
    pass


class EulerMismatch(ConfSpaceError):
    pass


class BadOuterMarker(ConfSpaceError):
    pass


class NoEssentialVertex(ConfSpaceError):
    pass


class NoOffBoundaryVertex(ConfSpaceError):
    pass
