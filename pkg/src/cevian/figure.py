"""Triangle subdivision by three concurrent cevians.

An interior point P of triangle ABC, joined to the vertices and extended to
the opposite sides, meets BC at D, CA at E, and AB at F. The three cevians
cut the triangle into six smaller triangles, numbered counterclockwise
starting with (P, B, D):

    1: (P, B, D)   2: (P, D, C)   3: (P, C, E)
    4: (P, E, A)   5: (P, A, F)   6: (P, F, B)

The configuration is parameterized by four angles in degrees:

    a = angle PBA,  b = angle PBC,  c = angle PCB,  d = angle PCA

which determine the figure up to similarity. All lengths are normalized so
the circumradius of ABC is 1/2, making every side equal to the sine of its
opposite angle.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import DegenerateConfig, DegenerateTriangle, PointOutside
from .precision import AngleDeg, real_to_str, to_radians, workbits

# Reject configurations within this many degrees of a degeneracy boundary.
ANGLE_GUARD_DEG = Fraction(1, 10**6)

# Relative barycentric-coordinate floor for "strictly inside".
BARYCENTRIC_GUARD = mpf("1e-9")


@dataclass(frozen=True)
class PointXY:
    x: mpf
    y: mpf


@dataclass(frozen=True)
class CevianConfig:
    """Exact-rational angle quadruple (a, b, c, d) in degrees."""

    a: AngleDeg
    b: AngleDeg
    c: AngleDeg
    d: AngleDeg

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        total = self.a + self.b + self.c + self.d
        if min(self.a, self.b, self.c, self.d) < ANGLE_GUARD_DEG:
            raise DegenerateConfig(f"cevian angles must be positive: {self.quadruple}")
        if total > 180 - ANGLE_GUARD_DEG:
            raise DegenerateConfig(f"angle sum {total} leaves no room for angle BAC")

    @property
    def quadruple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    @property
    def vertex_angle(self) -> Fraction:
        """Angle BAC in degrees."""
        return 180 - (self.a + self.b + self.c + self.d)


@dataclass(frozen=True)
class FigureLengths:
    """The fifteen segment lengths of the subdivided figure, circumradius 1/2."""

    AB: mpf
    BC: mpf
    CA: mpf
    AF: mpf
    FB: mpf
    AE: mpf
    EC: mpf
    BD: mpf
    DC: mpf
    PA: mpf
    PB: mpf
    PC: mpf
    PD: mpf
    PE: mpf
    PF: mpf

    def as_dict(self) -> dict[str, mpf]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class SubTriangle:
    index: int
    sides: tuple[mpf, mpf, mpf]
    area: mpf
    semiperimeter: mpf
    inradius: mpf
    circumradius: mpf


@dataclass(frozen=True)
class FigureMetrics:
    lengths: FigureLengths
    triangles: tuple[SubTriangle, ...]
    precision_bits: int

    @property
    def inradii(self) -> tuple[mpf, ...]:
        return tuple(t.inradius for t in self.triangles)

    @property
    def areas(self) -> tuple[mpf, ...]:
        return tuple(t.area for t in self.triangles)

    @property
    def semiperimeters(self) -> tuple[mpf, ...]:
        return tuple(t.semiperimeter for t in self.triangles)

    @property
    def circumradii(self) -> tuple[mpf, ...]:
        return tuple(t.circumradius for t in self.triangles)

    def quantity(self, code: str) -> tuple[mpf, ...]:
        """Per-triangle values for one of the codes r, K, s, R."""
        try:
            return {
                "r": self.inradii,
                "K": self.areas,
                "s": self.semiperimeters,
                "R": self.circumradii,
            }[code]
        except KeyError:
            raise ValueError(f"unknown quantity code: {code!r}") from None

    def to_flat_record(self) -> dict[str, str]:
        """Flat mapping of named decimal strings, exact round-trip."""
        bits = self.precision_bits
        record = {k: real_to_str(v, bits) for k, v in self.lengths.as_dict().items()}
        for code in ("K", "s", "r", "R"):
            for i, v in enumerate(self.quantity(code), start=1):
                record[f"{code}{i}"] = real_to_str(v, bits)
        return record


def _sine_chain(a: mpf, b: mpf, c: mpf, d: mpf) -> FigureLengths:
    # Angles in radians; every length falls out of the law of sines applied
    # around B and C, plus the cevian-ratio relation for D and the transversal
    # relation for PD.
    sin = mp.sin
    AB = sin(c + d)
    CA = sin(a + b)
    BC = sin(a + b + c + d)
    AF = CA * sin(d) / sin(a + b + c)
    FB = BC * sin(c) / sin(a + b + c)
    AE = AB * sin(a) / sin(b + c + d)
    EC = BC * sin(b) / sin(b + c + d)
    PB = BC * sin(c) / sin(b + c)
    PC = BC * sin(b) / sin(b + c)
    PE = EC * sin(d) / sin(b + c)
    PF = FB * sin(a) / sin(b + c)
    den = FB * AE + AF * EC
    BD = BC * FB * AE / den
    DC = BC * AF * EC / den
    PA = mp.sqrt(AB * AB + PB * PB - 2 * AB * PB * mp.cos(a))
    PD = PA * BD * EC / (BC * AE)
    return FigureLengths(
        AB=AB, BC=BC, CA=CA, AF=AF, FB=FB, AE=AE, EC=EC, BD=BD, DC=DC,
        PA=PA, PB=PB, PC=PC, PD=PD, PE=PE, PF=PF,
    )


def build_from_angles(config: CevianConfig, precision_bits: int) -> FigureLengths:
    """Segment lengths for an exact-rational angle configuration."""
    with workbits(precision_bits):
        rads = [to_radians(x) for x in config.quadruple]
        return _sine_chain(*rads)


def build_from_angles_real(a, b, c, d, precision_bits: int) -> FigureLengths:
    """Like build_from_angles but for numeric (already rounded) degree values.

    Used for measured angles and for off-grid confirmation samples whose
    parameters are deliberately irrational.
    """
    guard = mpf(ANGLE_GUARD_DEG.numerator) / ANGLE_GUARD_DEG.denominator
    with workbits(precision_bits):
        degs = [mpmath.mpmathify(x) for x in (a, b, c, d)]
        if min(degs) < guard:
            raise DegenerateConfig(f"cevian angles must be positive: {degs}")
        if sum(degs) > 180 - guard:
            raise DegenerateConfig(f"angle sum {sum(degs)} leaves no room for angle BAC")
        rads = [to_radians(x) for x in degs]
        return _sine_chain(*rads)


def _as_point(p) -> PointXY:
    if isinstance(p, PointXY):
        return p
    x, y = p
    return PointXY(mpmath.mpmathify(x), mpmath.mpmathify(y))


def _cross(ox, oy, ux, uy, vx, vy) -> mpf:
    return (ux - ox) * (vy - oy) - (uy - oy) * (vx - ox)


def _dist(p: PointXY, q: PointXY) -> mpf:
    return mp.hypot(p.x - q.x, p.y - q.y)


def _interior_barycentrics(A: PointXY, B: PointXY, C: PointXY, P: PointXY):
    """Normalized barycentric weights of P, validating strict interiority."""
    doubled = _cross(A.x, A.y, B.x, B.y, C.x, C.y)
    scale = max(_dist(A, B), _dist(B, C), _dist(C, A))
    if scale == 0 or abs(doubled) < mpf("1e-12") * scale * scale:
        raise DegenerateTriangle("triangle vertices are collinear or coincide")
    wa = _cross(P.x, P.y, B.x, B.y, C.x, C.y) / doubled
    wb = _cross(P.x, P.y, C.x, C.y, A.x, A.y) / doubled
    wc = _cross(P.x, P.y, A.x, A.y, B.x, B.y) / doubled
    if min(wa, wb, wc) < BARYCENTRIC_GUARD:
        raise PointOutside(f"point is not strictly inside: weights {(wa, wb, wc)}")
    return wa, wb, wc


def build_from_point(A, B, C, P, precision_bits: int) -> FigureLengths:
    """Segment lengths from explicit coordinates, renormalized to circumradius 1/2."""
    with workbits(precision_bits):
        A, B, C, P = (_as_point(p) for p in (A, B, C, P))
        wa, wb, wc = _interior_barycentrics(A, B, C, P)

        def combine(w1, p1, w2, p2):
            t = w1 + w2
            return PointXY((w1 * p1.x + w2 * p2.x) / t, (w1 * p1.y + w2 * p2.y) / t)

        D = combine(wb, B, wc, C)
        E = combine(wa, A, wc, C)
        F = combine(wa, A, wb, B)
        raw = FigureLengths(
            AB=_dist(A, B), BC=_dist(B, C), CA=_dist(C, A),
            AF=_dist(A, F), FB=_dist(F, B), AE=_dist(A, E), EC=_dist(E, C),
            BD=_dist(B, D), DC=_dist(D, C),
            PA=_dist(P, A), PB=_dist(P, B), PC=_dist(P, C),
            PD=_dist(P, D), PE=_dist(P, E), PF=_dist(P, F),
        )
        area = heron_area(raw.AB, raw.BC, raw.CA)
        circumradius = raw.AB * raw.BC * raw.CA / (4 * area)
        factor = mpf(1) / (2 * circumradius)
        return FigureLengths(**{k: v * factor for k, v in raw.as_dict().items()})


def angles_from_point(A, B, C, P, precision_bits: int) -> tuple[mpf, mpf, mpf, mpf]:
    """Measured (a, b, c, d) in degrees for an explicit interior point."""
    with workbits(precision_bits):
        A, B, C, P = (_as_point(p) for p in (A, B, C, P))
        _interior_barycentrics(A, B, C, P)

        def angle_at(o: PointXY, u: PointXY, v: PointXY) -> mpf:
            cross = _cross(o.x, o.y, u.x, u.y, v.x, v.y)
            dot = (u.x - o.x) * (v.x - o.x) + (u.y - o.y) * (v.y - o.y)
            return mp.atan2(abs(cross), dot) * 180 / mp.pi

        return (
            angle_at(B, P, A),
            angle_at(B, P, C),
            angle_at(C, P, B),
            angle_at(C, P, A),
        )


def heron_area(x: mpf, y: mpf, z: mpf) -> mpf:
    """Numerically stable Heron area (sides sorted before differencing)."""
    a, b, c = sorted((x, y, z), reverse=True)
    if c <= 0:
        raise DegenerateTriangle(f"side lengths must be positive: {(x, y, z)}")
    t = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    if t <= 0:
        raise DegenerateTriangle(f"side lengths violate the triangle inequality: {(x, y, z)}")
    return mp.sqrt(t) / 4


_SUBTRIANGLE_SIDES = (
    ("PB", "BD", "PD"),
    ("PD", "DC", "PC"),
    ("PC", "EC", "PE"),
    ("PE", "AE", "PA"),
    ("PA", "AF", "PF"),
    ("PF", "FB", "PB"),
)


def metrics(lengths: FigureLengths, precision_bits: int) -> FigureMetrics:
    """Area, semiperimeter, inradius, and circumradius of all six triangles."""
    with workbits(precision_bits):
        values = lengths.as_dict()
        triangles = []
        for i, names in enumerate(_SUBTRIANGLE_SIDES, start=1):
            sides = tuple(values[n] for n in names)
            area = heron_area(*sides)
            semi = (sides[0] + sides[1] + sides[2]) / 2
            triangles.append(
                SubTriangle(
                    index=i,
                    sides=sides,
                    area=area,
                    semiperimeter=semi,
                    inradius=area / semi,
                    circumradius=sides[0] * sides[1] * sides[2] / (4 * area),
                )
            )
        return FigureMetrics(lengths=lengths, triangles=tuple(triangles),
                             precision_bits=precision_bits)


def area_crosscheck(figure: FigureMetrics) -> mpf:
    """Max relative gap between Heron areas and the two-sides-and-sine form."""
    with workbits(figure.precision_bits):
        worst = mpf(0)
        for tri in figure.triangles:
            u, v, w = tri.sides
            cosine = (u * u + v * v - w * w) / (2 * u * v)
            alt = u * v * mp.sin(mp.acos(cosine)) / 2
            worst = max(worst, abs(alt - tri.area) / tri.area)
        return worst
