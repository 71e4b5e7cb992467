"""Exception hierarchy shared across the package."""


class CevianError(Exception):
    """Base class for all domain errors raised by this package."""


class PrecisionTooLow(CevianError):
    """Requested binary precision is below the supported minimum."""


class DegenerateConfig(CevianError):
    """Cevian angles violate positivity or the angle-sum constraint."""


class DegenerateTriangle(CevianError):
    """Triangle vertices are collinear or coincide."""


class PointOutside(CevianError):
    """Interior point lies on or outside the triangle boundary."""


class CenterNotInterior(CevianError):
    """Requested notable center falls outside the triangle for this shape."""


class UnsatisfiablePredicate(CevianError):
    """Catalog predicate admits no valid configuration."""


class ZeroInput(CevianError):
    """Integer-relation input vector contains an exact zero."""


class StoreFailure(CevianError):
    """Record log could not be opened, locked, or written."""


class SchemaMismatch(CevianError):
    """Record log header does not match the supported schema version."""


class TooFewPoints(CevianError):
    """Not enough points for the requested fit."""


class DegenerateSample(CevianError):
    """Every confirmation sample for a family fell outside the valid domain."""
