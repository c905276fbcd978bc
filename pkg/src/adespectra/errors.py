"""Exception types raised across the package."""


class AdeSpectraError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(AdeSpectraError, ValueError):
    pass


class PoleAtOriginError(AdeSpectraError, ZeroDivisionError):
    pass


class ParityError(AdeSpectraError, ValueError):
    pass


class RangeError(AdeSpectraError, ValueError):
    pass


class NotFiniteError(AdeSpectraError, ValueError):
    """A symbolic infinite graph was used where a finite one is needed."""


class ShapeError(AdeSpectraError, ValueError):
    pass


class CatalogError(AdeSpectraError, KeyError):
    pass


class GraphNameError(AdeSpectraError, ValueError):
    pass


class PeriodError(AdeSpectraError, ValueError):
    """The target T-series is not a polynomial after clearing the period."""


class NotRootOfUnitySupportedError(AdeSpectraError, ValueError):
    pass


class ConsistencyError(AdeSpectraError, RuntimeError):
    """An internal identity that must hold was found violated."""
