"""Exception hierarchy shared by all wignerkit modules."""


class WignerKitError(ValueError):
    """Base class for every error raised by wignerkit.

    Keyword arguments are kept in ``details`` so callers can report them.
    """

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class DimensionMismatch(WignerKitError):
    pass


class EmptySpanError(WignerKitError):
    pass


class ZeroComplementError(WignerKitError):
    pass


class PreconditionError(WignerKitError):
    pass


class ToleranceBreakdown(WignerKitError):
    """Two characterizations of the same relation disagree numerically."""


class RankInstability(WignerKitError):
    """Dimension counts from independent formulas disagree."""


class MissingRaysError(WignerKitError):
    pass


class NotOrthogonalityPreserving(WignerKitError):
    pass


class NotInducedByIsometry(WignerKitError):
    pass


class TableInconsistent(WignerKitError):
    pass


class DescentError(WignerKitError):
    """A Grassmann map fails to send a star into a star."""
