"""High-precision toolkit for the six incircles of a cevian-subdivided triangle."""

from .catalog import (
    CatalogEntry,
    EntryPredicate,
    VerificationReport,
    catalog,
    check_circumcenter_lemma,
    check_incenter_ratios,
    evaluate,
    lookup,
    verify,
)
from .centers import NotableCenter, TriangleShape, center_config, center_point, \
    triangle_coords
from .discovery import BasisFunction, GridSpec, SweepSummary, confirm_family, \
    pair_and_extrapolate, sweep
from .errors import (
    CenterNotInterior,
    CevianError,
    DegenerateConfig,
    DegenerateSample,
    DegenerateTriangle,
    PointOutside,
    PrecisionTooLow,
    SchemaMismatch,
    StoreFailure,
    TooFewPoints,
    UnsatisfiablePredicate,
    ZeroInput,
)
from .figure import (
    CevianConfig,
    FigureLengths,
    FigureMetrics,
    PointXY,
    SubTriangle,
    angles_from_point,
    area_crosscheck,
    build_from_angles,
    build_from_angles_real,
    build_from_point,
    heron_area,
    metrics,
)
from .intrel import RelationCandidate, all_six_involved, find_integer_relation
from .locus import LineFit, LocusField, LocusPolyline, extract_zero_set, fit_line, \
    locus_value, scan
from .precision import AngleDeg, detect_digits, parse_angle, real_from_str, \
    real_to_str, to_radians, workbits
from .relations import Monomial, Relation, normalize_vector
from .store import FamilyCandidate, RecordLog, RelationRecord

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
