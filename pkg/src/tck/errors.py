"""Exception hierarchy shared by every module."""


class TckError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(TckError):
    """A raw graph violates one of the network axioms."""


class NotAcyclic(ValidationError):
    pass


class ParallelArcs(ValidationError):
    pass


class BadDegree(ValidationError):
    def __init__(self, vertex, indeg, outdeg):
        super().__init__(f"vertex {vertex!r} has (in, out) degree ({indeg}, {outdeg})")
        self.vertex = vertex


class RootError(ValidationError):
    """No root, or more than one in-degree-zero vertex."""


class DuplicateLabel(ValidationError):
    pass


class UnlabeledLeaf(ValidationError):
    pass


class NotTreeChild(TckError):
    pass


class NotReticulation(TckError):
    pass


class NotReticulationArc(TckError):
    pass


class InternalAssertionFailed(TckError):
    """An invariant that must hold by construction was violated (a bug)."""


class ArcVanished(TckError):
    pass


class UnknownLabel(TckError):
    pass


class EmptySubset(TckError):
    pass


class TooFewLabels(TckError):
    pass


class TooManyReticulations(TckError):
    pass


class LabelMismatch(TckError):
    pass


class OutOfRange(TckError):
    pass


class BadOrder(TckError):
    pass


class SpecInconsistent(TckError):
    pass


class KIsOne(TckError):
    pass


class ScaleExceeded(TckError):
    pass


class ParseError(ValidationError):
    """Malformed text input; carries a 1-based line and column."""

    def __init__(self, message, line=1, col=1):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class TagArityError(ParseError):
    pass
