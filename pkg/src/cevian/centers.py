"""Notable triangle centers as cevian configurations.

A triangle shape is given by its three vertex angles (A, B, C) in exact
degrees. For a chosen center P the corresponding cevian quadruple
(a, b, c, d) = (PBA, PBC, PCB, PCA) is produced either from a closed form
(incenter, circumcenter, orthocenter) or by placing the center in
coordinates and measuring.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .errors import CenterNotInterior, DegenerateTriangle, PointOutside
from .figure import PointXY, angles_from_point
from .precision import AngleDeg, to_radians, workbits


class NotableCenter(enum.Enum):
    ORTHOCENTER = "orthocenter"
    CENTROID = "centroid"
    CIRCUMCENTER = "circumcenter"
    INCENTER = "incenter"
    NINE_POINT = "ninepoint"
    NAGEL = "nagel"
    GERGONNE = "gergonne"

    @classmethod
    def parse(cls, token: str) -> "NotableCenter":
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise ValueError(f"unknown center: {token!r}") from None


# Centers guaranteed interior only for acute triangles.
_ACUTE_ONLY = {NotableCenter.ORTHOCENTER, NotableCenter.CIRCUMCENTER}


@dataclass(frozen=True)
class TriangleShape:
    """Vertex angles (at A, B, C) in exact degrees summing to 180."""

    angle_a: AngleDeg
    angle_b: AngleDeg
    angle_c: AngleDeg

    def __post_init__(self):
        for name in ("angle_a", "angle_b", "angle_c"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.angle_a + self.angle_b + self.angle_c != 180:
            raise DegenerateTriangle(
                f"vertex angles must sum to 180: {self.angles}")
        if min(self.angles) <= 0:
            raise DegenerateTriangle(
                f"vertex angles must be positive: {self.angles}")

    @property
    def angles(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.angle_a, self.angle_b, self.angle_c)

    @property
    def is_acute(self) -> bool:
        return max(self.angles) < 90


def triangle_coords(shape: TriangleShape, precision_bits: int):
    """Vertices on the circle of radius 1/2 about the origin, A at angle 90.

    Walking counterclockwise, the arc from A to B is 2C and from B to C is
    2A, so each side subtends twice its opposite angle.
    """
    with workbits(precision_bits):
        theta_a = mp.pi / 2
        theta_b = theta_a + 2 * to_radians(shape.angle_c)
        theta_c = theta_b + 2 * to_radians(shape.angle_a)
        radius = mpf(1) / 2
        return tuple(
            PointXY(radius * mp.cos(t), radius * mp.sin(t))
            for t in (theta_a, theta_b, theta_c)
        )


def center_point(shape: TriangleShape, center: NotableCenter, precision_bits: int) -> PointXY:
    """Coordinates of the center in the triangle_coords frame."""
    with workbits(precision_bits):
        A, B, C = triangle_coords(shape, precision_bits)
        sin = mp.sin
        # side lengths opposite A, B, C
        a = sin(to_radians(shape.angle_a))
        b = sin(to_radians(shape.angle_b))
        c = sin(to_radians(shape.angle_c))
        s = (a + b + c) / 2

        def weighted(wa, wb, wc):
            total = wa + wb + wc
            return PointXY(
                (wa * A.x + wb * B.x + wc * C.x) / total,
                (wa * A.y + wb * B.y + wc * C.y) / total,
            )

        if center is NotableCenter.CIRCUMCENTER:
            return PointXY(mpf(0), mpf(0))
        if center is NotableCenter.CENTROID:
            return weighted(1, 1, 1)
        if center is NotableCenter.ORTHOCENTER:
            # circumcenter at origin, so H = A + B + C
            return PointXY(A.x + B.x + C.x, A.y + B.y + C.y)
        if center is NotableCenter.NINE_POINT:
            return PointXY((A.x + B.x + C.x) / 2, (A.y + B.y + C.y) / 2)
        if center is NotableCenter.INCENTER:
            return weighted(a, b, c)
        if center is NotableCenter.NAGEL:
            return weighted(s - a, s - b, s - c)
        if center is NotableCenter.GERGONNE:
            return weighted((s - b) * (s - c), (s - c) * (s - a), (s - a) * (s - b))
        raise ValueError(f"unhandled center: {center}")


def center_config(shape: TriangleShape, center: NotableCenter,
                  precision_bits: int) -> tuple[mpf, mpf, mpf, mpf]:
    """Cevian quadruple (a, b, c, d) in degrees for the given center.

    Incenter and circumcenter use exact closed forms; the rest are measured
    from coordinates. Raises CenterNotInterior when the center does not lie
    strictly inside the triangle.
    """
    if center in _ACUTE_ONLY and not shape.is_acute:
        raise CenterNotInterior(f"{center.value} lies outside a non-acute triangle")
    with workbits(precision_bits):
        A_deg, B_deg, C_deg = shape.angles

        def as_mpf(x: Fraction) -> mpf:
            return mpf(x.numerator) / x.denominator

        if center is NotableCenter.INCENTER:
            return tuple(as_mpf(x) for x in (B_deg / 2, B_deg / 2, C_deg / 2, C_deg / 2))
        if center is NotableCenter.CIRCUMCENTER:
            exact = (90 - C_deg, 90 - A_deg, 90 - A_deg, 90 - B_deg)
            return tuple(as_mpf(x) for x in exact)
        vertices = triangle_coords(shape, precision_bits)
        point = center_point(shape, center, precision_bits)
        try:
            return angles_from_point(*vertices, point, precision_bits)
        except PointOutside as exc:
            raise CenterNotInterior(
                f"{center.value} is not interior for shape {shape.angles}"
            ) from exc
