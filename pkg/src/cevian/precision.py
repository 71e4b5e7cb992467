"""Working-precision plumbing.

All numeric kernels in this package run inside an explicit binary-precision
context. Angles that come from grids, catalog entries, or the command line
are exact rationals in degrees (``fractions.Fraction``) and are converted to
radians only at the point of numeric evaluation.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import PrecisionTooLow

MIN_PRECISION_BITS = 64

AngleDeg = Fraction


def require_precision(precision_bits: int) -> None:
    if precision_bits < MIN_PRECISION_BITS:
        raise PrecisionTooLow(
            f"precision_bits={precision_bits} is below the minimum {MIN_PRECISION_BITS}"
        )


@contextmanager
def workbits(precision_bits: int):
    """Context manager setting mpmath working precision in bits."""
    require_precision(precision_bits)
    with mp.workprec(precision_bits):
        yield mp


def detect_digits(precision_bits: int) -> int:
    """Decimal digits trusted for detection at a given binary precision.

    Roughly a quarter of the available decimal digits; the remainder is
    headroom so that accumulated rounding error cannot mimic a relation.
    """
    require_precision(precision_bits)
    return int(0.075 * precision_bits)


def parse_angle(text: str) -> AngleDeg:
    """Parse an exact degree value: ``"15"``, ``"45/2"``, or ``"22.5"``."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact degree value: {text!r}") from exc
    return value


def to_radians(degrees) -> mpf:
    """Convert degrees (Fraction, int, or mpf) to radians at current precision.

    Rational inputs are evaluated exactly before the single rounding at the
    end; callers are expected to already be inside a workbits context.
    """
    if isinstance(degrees, Fraction):
        return mpf(degrees.numerator) / degrees.denominator * mp.pi / 180
    return mpmath.mpmathify(degrees) * mp.pi / 180


def real_to_str(x: mpf, precision_bits: int) -> str:
    """Serialize to a decimal string that parses back to the same mpf."""
    digits = mpmath.libmp.prec_to_dps(precision_bits) + 3
    return mpmath.nstr(x, digits)


def real_from_str(text: str, precision_bits: int) -> mpf:
    with workbits(precision_bits):
        return mpf(text)
