"""Exception hierarchy shared by all modules."""


class GeometryError(Exception):
    """Base class for errors raised by the geometric kernel and its users."""


class DimensionMismatch(GeometryError, ValueError):
    pass


class AffineDependence(GeometryError, ValueError):
    """Raised when a construction needs affinely independent points."""


class DegeneracyError(GeometryError):
    """The input is not in general position.

    ``subset`` names the offending point indices when they are known.
    """

    def __init__(self, message, subset=None):
        super().__init__(message)
        self.subset = tuple(subset) if subset is not None else None


class InfeasibleConstraints(GeometryError, ValueError):
    pass


class SizeGuardError(ValueError):
    """A brute-force routine refused an input larger than its guard."""
