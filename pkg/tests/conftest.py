"""Shared fixtures and oracle helpers for the cevian test suite."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from mpmath import mpf, sqrt

from cevian.figure import CevianConfig, build_from_angles, metrics
from cevian.precision import workbits

settings.register_profile(
    "cevian",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("cevian")


def rel_err(value, oracle, bits: int = 256) -> mpf:
    """Relative error against a nonzero oracle, at the given working precision."""
    with workbits(bits):
        value = mpf(value)
        oracle = mpf(oracle)
        if oracle == 0:
            return abs(value)
        return abs(value - oracle) / abs(oracle)


def incenter_306090_inradii(bits: int) -> tuple[mpf, ...]:
    """Closed forms for the six inradii when P is the incenter of the
    30-60-90 triangle (vertex angle order A=90, B=30, C=60), derived
    independently with surd arithmetic at the target precision."""
    with workbits(bits):
        s2, s3, s6 = sqrt(2), sqrt(3), sqrt(6)
        return (
            (s2 - 1) * (s3 - 1) / 4,
            (-10 - 7 * s2 + 6 * s3 + 4 * s6) / 4,
            (9 - 7 * s2 - 5 * s3 + 4 * s6) / 4,
            (-4 - s2 + 2 * s3 + s6) / 8,
            (-3 * s2 + 2 * s3 + s6) / 24,
            (1 + s3 - s6) / 4,
        )


@pytest.fixture(scope="session")
def incenter_306090():
    """FigureMetrics for the incenter of the 30-60-90 triangle at 256 bits."""
    config = CevianConfig(Fraction(15), Fraction(15), Fraction(30), Fraction(30))
    return metrics(build_from_angles(config, 256), 256)


@pytest.fixture(scope="session")
def equilateral_center():
    """FigureMetrics for the center of the equilateral triangle at 256 bits."""
    config = CevianConfig(Fraction(30), Fraction(30), Fraction(30), Fraction(30))
    return metrics(build_from_angles(config, 256), 256)
