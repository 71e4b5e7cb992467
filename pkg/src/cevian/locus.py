"""Zero-locus scan of the alternating inradius sum over a fixed triangle.

For a fixed shape, the functional g(P) = (r1 + r3 + r5) - (r2 + r4 + r6)
is sampled on a barycentric lattice of interior points. Sign changes are
traced on the lattice's simplicial cells (each cell is a triangle, so a
sign pattern never has the saddle ambiguity square cells suffer from),
each crossing edge is refined by bisection, and the refined points are
chained into polylines. A straightness report then quantifies how line-like
each polyline is.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from mpmath import mpf

from .centers import TriangleShape, triangle_coords
from .errors import TooFewPoints
from .figure import FigureMetrics, PointXY, build_from_point, metrics
from .precision import workbits

Functional = Callable[[FigureMetrics], mpf]


def alternating_inradius_sum(figure: FigureMetrics) -> mpf:
    r = figure.inradii
    return (r[0] + r[2] + r[4]) - (r[1] + r[3] + r[5])


@dataclass(frozen=True)
class LocusField:
    shape: TriangleShape
    resolution: int
    vertices: tuple[PointXY, PointXY, PointXY]
    nodes: tuple[tuple[int, int, int], ...]
    points: tuple[PointXY, ...]
    values: tuple[mpf, ...]
    precision_bits: int

    @property
    def diameter(self) -> mpf:
        (a, b, c) = self.vertices
        return max(_dist(a, b), _dist(b, c), _dist(c, a))


@dataclass(frozen=True)
class LocusPolyline:
    points: tuple[PointXY, ...]
    residuals: tuple[mpf, ...]
    closed: bool


@dataclass(frozen=True)
class LineFit:
    centroid: tuple[float, float]
    direction: tuple[float, float]
    max_deviation: float  # in units of the triangle diameter


def _dist(p: PointXY, q: PointXY) -> mpf:
    return ((p.x - q.x) ** 2 + (p.y - q.y) ** 2) ** mpf("0.5")


def locus_value(vertices, point: PointXY, precision_bits: int,
                functional: Optional[Functional] = None) -> mpf:
    """Evaluate the locus functional at one interior point."""
    functional = functional or alternating_inradius_sum
    a, b, c = vertices
    lengths = build_from_point(a, b, c, point, precision_bits)
    with workbits(precision_bits):
        return functional(metrics(lengths, precision_bits))


def scan(shape: TriangleShape, resolution: int, precision_bits: int,
         functional: Optional[Functional] = None) -> LocusField:
    """Sample the functional on interior lattice nodes (i, j, k), i+j+k = n.

    Nodes with a zero component sit on the boundary where the figure
    degenerates, so only strictly positive triples are used; at resolution n
    that gives (n-1)(n-2)/2 nodes.
    """
    if resolution < 3:
        raise ValueError("resolution must be at least 3 to have interior nodes")
    vertices = triangle_coords(shape, precision_bits)
    a, b, c = vertices
    nodes = []
    points = []
    values = []
    with workbits(precision_bits):
        for i in range(1, resolution - 1):
            for j in range(1, resolution - i):
                k = resolution - i - j
                point = PointXY(
                    (i * a.x + j * b.x + k * c.x) / resolution,
                    (i * a.y + j * b.y + k * c.y) / resolution,
                )
                nodes.append((i, j, k))
                points.append(point)
                values.append(locus_value(vertices, point, precision_bits, functional))
    return LocusField(
        shape=shape, resolution=resolution, vertices=vertices,
        nodes=tuple(nodes), points=tuple(points), values=tuple(values),
        precision_bits=precision_bits,
    )


def _refine_crossing(field: LocusField, p0: PointXY, v0: mpf, p1: PointXY, v1: mpf,
                     tolerance: mpf, precision_bits: int,
                     functional: Optional[Functional]) -> tuple[PointXY, mpf]:
    """Bisect a sign-changing segment down to |g| < tolerance."""
    with workbits(precision_bits):
        s0 = v0 > 0
        a, va, b, vb = p0, v0, p1, v1
        best, best_val = (a, va) if abs(va) < abs(vb) else (b, vb)
        for _ in range(4 * precision_bits):
            if abs(best_val) < tolerance:
                break
            mid = PointXY((a.x + b.x) / 2, (a.y + b.y) / 2)
            vm = locus_value(field.vertices, mid, precision_bits, functional)
            if abs(vm) < abs(best_val):
                best, best_val = mid, vm
            if (vm > 0) == s0:
                a, va = mid, vm
            else:
                b, vb = mid, vm
        return best, abs(best_val)


def _cells(field: LocusField):
    """Simplicial cells as triples of (i, j) node keys, deterministic order."""
    n = field.resolution
    present = {(i, j) for (i, j, _) in field.nodes}
    cells = []
    for i, j, _ in field.nodes:
        up = ((i, j), (i + 1, j), (i, j + 1))
        if all(key in present for key in up[1:]):
            cells.append(("u", i, j, up))
        down = ((i + 1, j), (i, j + 1), (i + 1, j + 1))
        if all(key in present for key in down):
            cells.append(("d", i, j, down))
    return cells


def extract_zero_set(field: LocusField, refine_tolerance: mpf,
                     precision_bits: int,
                     functional: Optional[Functional] = None) -> list[LocusPolyline]:
    """Trace the zero set of the field as refined, chained polylines.

    Returns an empty list when the field has uniform sign. The polyline
    points all satisfy |g| < refine_tolerance.
    """
    index = {(i, j): pos for pos, (i, j, _) in enumerate(field.nodes)}
    tolerance = mpf(refine_tolerance)

    cells = _cells(field)
    crossings: dict[tuple, tuple[PointXY, mpf]] = {}
    segments: dict[tuple, tuple[tuple, tuple]] = {}
    links: dict[tuple, list[tuple]] = {}

    def sign(key) -> bool:
        return field.values[index[key]] > 0

    for kind, i, j, keys in cells:
        flips = []
        for a, b in ((keys[0], keys[1]), (keys[1], keys[2]), (keys[0], keys[2])):
            if sign(a) != sign(b):
                flips.append(tuple(sorted((a, b))))
        if not flips:
            continue
        cell_id = (kind, i, j)
        for edge in flips:
            if edge not in crossings:
                a, b = edge
                crossings[edge] = _refine_crossing(
                    field,
                    field.points[index[a]], field.values[index[a]],
                    field.points[index[b]], field.values[index[b]],
                    tolerance, precision_bits, functional,
                )
            links.setdefault(edge, []).append(cell_id)
        segments[cell_id] = (flips[0], flips[1])

    polylines = []
    visited: set[tuple] = set()
    for cell_id in sorted(segments):
        if cell_id in visited:
            continue
        visited.add(cell_id)
        first_edge, second_edge = segments[cell_id]

        def extend(start_cell, start_edge):
            chain = []
            cur_cell, cur_edge = start_cell, start_edge
            closed = False
            while True:
                nxt = [c for c in links[cur_edge] if c != cur_cell]
                if not nxt:
                    break
                cur_cell = nxt[0]
                if cur_cell in visited:
                    closed = cur_cell == cell_id
                    break
                visited.add(cur_cell)
                e1, e2 = segments[cur_cell]
                cur_edge = e2 if cur_edge == e1 else e1
                chain.append(cur_edge)
            return chain, closed

        forward, closed = extend(cell_id, second_edge)
        backward = [] if closed else extend(cell_id, first_edge)[0]
        edge_path = list(reversed(backward)) + [first_edge, second_edge] + forward
        pts = tuple(crossings[e][0] for e in edge_path)
        res = tuple(crossings[e][1] for e in edge_path)
        polylines.append(LocusPolyline(points=pts, residuals=res, closed=closed))
    return polylines


def fit_line(points: Sequence[PointXY], diameter) -> LineFit:
    """Total-least-squares line through the points, worst deviation scaled."""
    if len(points) < 3:
        raise TooFewPoints(f"need at least 3 points to assess a line, got {len(points)}")
    coords = np.array([[float(p.x), float(p.y)] for p in points], dtype=float)
    centroid = coords.mean(axis=0)
    centered = coords - centroid
    _, _, vh = np.linalg.svd(centered, full_matrices=False)
    direction = vh[0]
    normal = np.array([-direction[1], direction[0]])
    deviation = float(np.max(np.abs(centered @ normal)))
    return LineFit(
        centroid=(float(centroid[0]), float(centroid[1])),
        direction=(float(direction[0]), float(direction[1])),
        max_deviation=deviation / float(diameter),
    )
