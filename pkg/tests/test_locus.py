"""Tests for the zero-locus scan, extraction, and straightness report."""

from fractions import Fraction

import pytest
from mpmath import mpf

from cevian.centers import TriangleShape
from cevian.errors import TooFewPoints
from cevian.figure import PointXY
from cevian.locus import (
    alternating_inradius_sum,
    extract_zero_set,
    fit_line,
    locus_value,
    scan,
)
from cevian.precision import workbits

BITS = 128
TOL = mpf("1e-30")

EQUILATERAL = TriangleShape(Fraction(60), Fraction(60), Fraction(60))
SCALENE = TriangleShape(Fraction(50), Fraction(60), Fraction(70))


@pytest.fixture(scope="module")
def equilateral_field():
    return scan(EQUILATERAL, 12, BITS)


@pytest.fixture(scope="module")
def equilateral_polys(equilateral_field):
    return extract_zero_set(equilateral_field, TOL, BITS)


@pytest.fixture(scope="module")
def scalene_field():
    return scan(SCALENE, 10, BITS)


@pytest.fixture(scope="module")
def scalene_polys(scalene_field):
    return extract_zero_set(scalene_field, TOL, BITS)


class TestScan:
    def test_resolution_below_three_rejected(self):
        with pytest.raises(ValueError):
            scan(EQUILATERAL, 2, BITS)

    @pytest.mark.parametrize("resolution", [3, 5, 8, 12])
    def test_interior_node_count(self, resolution):
        field = scan(EQUILATERAL, resolution, BITS)
        assert len(field.nodes) == (resolution - 1) * (resolution - 2) // 2
        assert len(field.points) == len(field.nodes) == len(field.values)

    def test_nodes_are_strictly_interior(self, equilateral_field):
        for i, j, k in equilateral_field.nodes:
            assert min(i, j, k) >= 1
            assert i + j + k == equilateral_field.resolution

    def test_diameter_is_longest_side(self, equilateral_field):
        # vertices sit on the circle of radius 1/2, so the side is sqrt(3)/2
        with workbits(BITS):
            side = mpf(3) ** mpf("0.5") / 2
            assert abs(equilateral_field.diameter - side) < mpf("1e-35")

    def test_center_node_is_a_zero(self, equilateral_field):
        # the lattice node at the centroid coincides with the symmetry center
        idx = equilateral_field.nodes.index((4, 4, 4))
        assert abs(equilateral_field.values[idx]) < TOL

    def test_mirror_antisymmetry(self):
        # reflecting across the median through A swaps the odd and even
        # subtriangles, so the functional flips sign
        field = scan(EQUILATERAL, 8, BITS)
        by_node = dict(zip(field.nodes, field.values))
        for (i, j, k), value in by_node.items():
            assert abs(value + by_node[(i, k, j)]) < TOL

    def test_default_functional_is_alternating_sum(self, equilateral_field):
        point = equilateral_field.points[0]
        default = locus_value(equilateral_field.vertices, point, BITS)
        explicit = locus_value(equilateral_field.vertices, point, BITS,
                               functional=alternating_inradius_sum)
        assert default == explicit

    def test_scan_is_deterministic(self, equilateral_field):
        again = scan(EQUILATERAL, 12, BITS)
        assert again.nodes == equilateral_field.nodes
        assert again.values == equilateral_field.values


class TestExtraction:
    def test_equilateral_branches(self, equilateral_polys):
        assert sorted(len(p.points) for p in equilateral_polys) == [16, 16, 16]
        assert not any(p.closed for p in equilateral_polys)

    def test_residuals_below_tolerance(self, equilateral_polys):
        for poly in equilateral_polys:
            assert len(poly.points) == len(poly.residuals)
            assert max(poly.residuals) < TOL

    def test_points_reevaluate_below_tolerance(self, equilateral_field,
                                               equilateral_polys):
        for poly in equilateral_polys:
            for point in poly.points:
                value = locus_value(equilateral_field.vertices, point, BITS)
                assert abs(value) < TOL

    def test_zero_set_contains_center(self, equilateral_polys):
        # the three medians are exact zero lines, so a traced point should
        # land essentially on the centroid at the origin
        closest = min(
            (p.x ** 2 + p.y ** 2) ** mpf("0.5")
            for poly in equilateral_polys for p in poly.points
        )
        assert closest < mpf("1e-20")

    def test_uniform_sign_yields_empty(self):
        positive = lambda figure: figure.inradii[0]
        field = scan(EQUILATERAL, 6, BITS, functional=positive)
        assert extract_zero_set(field, TOL, BITS, functional=positive) == []

    def test_scalene_branches(self, scalene_field, scalene_polys):
        assert len(scalene_polys) == 3
        assert sum(len(p.points) for p in scalene_polys) == 34
        for poly in scalene_polys:
            assert max(poly.residuals) < TOL
            for point in poly.points:
                value = locus_value(scalene_field.vertices, point, BITS)
                assert abs(value) < TOL

    def test_extraction_is_deterministic(self, equilateral_field,
                                         equilateral_polys):
        again = extract_zero_set(equilateral_field, TOL, BITS)
        assert len(again) == len(equilateral_polys)
        for fresh, cached in zip(again, equilateral_polys):
            assert fresh.points == cached.points
            assert fresh.residuals == cached.residuals
            assert fresh.closed == cached.closed


class TestFitLine:
    def test_collinear_points(self):
        points = [PointXY(mpf(t), mpf(2 * t)) for t in range(5)]
        fit = fit_line(points, 1)
        assert fit.max_deviation < 1e-12
        assert fit.centroid == pytest.approx((2.0, 4.0))
        # direction is parallel to (1, 2), up to sign
        cross = fit.direction[0] * 2 - fit.direction[1] * 1
        assert abs(cross) < 1e-9

    def test_direction_is_unit(self):
        points = [PointXY(mpf(0), mpf(0)), PointXY(mpf(2), mpf(0)),
                  PointXY(mpf(0), mpf(2))]
        fit = fit_line(points, 1)
        norm = fit.direction[0] ** 2 + fit.direction[1] ** 2
        assert norm == pytest.approx(1.0)

    def test_right_triangle_deviation(self):
        # centroid (2/3, 2/3), principal axis along (1, -1); the far corner
        # sits 4/(3*sqrt(2)) off the line, and the diameter is 2*sqrt(2)
        points = [PointXY(mpf(0), mpf(0)), PointXY(mpf(2), mpf(0)),
                  PointXY(mpf(0), mpf(2))]
        fit = fit_line(points, 2 * 2 ** 0.5)
        assert fit.max_deviation == pytest.approx(1 / 3)

    def test_deviation_scales_with_diameter(self):
        points = [PointXY(mpf(0), mpf(0)), PointXY(mpf(2), mpf(0)),
                  PointXY(mpf(0), mpf(2))]
        one = fit_line(points, 1)
        two = fit_line(points, 2)
        assert one.max_deviation == pytest.approx(2 * two.max_deviation)

    def test_too_few_points(self):
        points = [PointXY(mpf(0), mpf(0)), PointXY(mpf(1), mpf(1))]
        with pytest.raises(TooFewPoints):
            fit_line(points, 1)

    def test_scalene_straightest_branch(self, scalene_field, scalene_polys):
        # the report should flag at least one strongly line-like branch
        fits = [fit_line(p.points, scalene_field.diameter)
                for p in scalene_polys if len(p.points) >= 3]
        assert fits
        assert min(f.max_deviation for f in fits) < 0.05
