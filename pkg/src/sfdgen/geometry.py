"""Shared geometry primitives and layout constants.

All coordinates are in abstract layout units, x to the right and y
downward (SVG convention). Symbol footprints are axis-aligned
rectangles described by a center plus half-extents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

Point = tuple[float, float]

# Crude text metrics for a ~12px sans font; good enough to reserve
# label space when sizing nodes.
CHAR_WIDTH = 7.0
TEXT_HEIGHT = 14.0

AUX_RADIUS = 12.0
VALVE_SIZE = 10.0
CLOUD_RADIUS = 14.0


@dataclass(frozen=True)
class ChainLayoutParams:
    """Geometry knobs for laying out the interior of a stock-flow chain."""

    stock_width: float = 45.0
    stock_height: float = 35.0
    column_width: float = 120.0   # fixed horizontal offset between stock columns
    row_spacing: float = 25.0     # vertical gap added to stock height per slot
    margin: float = 15.0          # padding added around every sized node
    flow_pitch: float = 10.0      # vertical spread between flows sharing a stock side


@dataclass(frozen=True)
class LayoutParams:
    """Geometry knobs for the module-level force-directed layout."""

    unit_length: float = 180.0    # ideal edge length (one hop)
    margin: float = 15.0
    stress_tol: float = 1e-4      # relative stress improvement cutoff
    max_iter_per_node: int = 500  # sweep cap = this times node count
    two_cycle_bulge: float = 0.15  # arc sagitta as fraction of chord length


def text_extent(label: str) -> tuple[float, float]:
    return (len(label) * CHAR_WIDTH, TEXT_HEIGHT)


@dataclass
class Rect:
    """Axis-aligned rectangle as center + half extents."""

    cx: float
    cy: float
    half_w: float
    half_h: float

    @property
    def left(self) -> float:
        return self.cx - self.half_w

    @property
    def right(self) -> float:
        return self.cx + self.half_w

    @property
    def top(self) -> float:
        return self.cy - self.half_h

    @property
    def bottom(self) -> float:
        return self.cy + self.half_h

    def contains(self, p: Point, eps: float = 1e-9) -> bool:
        return (self.left - eps <= p[0] <= self.right + eps
                and self.top - eps <= p[1] <= self.bottom + eps)

    def overlaps(self, other: "Rect") -> bool:
        """Strict interior overlap; touching boundaries do not count."""
        return (self.left < other.right and other.left < self.right
                and self.top < other.bottom and other.top < self.bottom)

    def intersection_area(self, other: "Rect") -> float:
        w = min(self.right, other.right) - max(self.left, other.left)
        h = min(self.bottom, other.bottom) - max(self.top, other.top)
        if w <= 0.0 or h <= 0.0:
            return 0.0
        return w * h

    def boundary_point_toward(self, target: Point) -> Point:
        """Intersection of the ray center->target with this rectangle's edge.

        Falls back to the right edge midpoint when target coincides with
        the center.
        """
        dx = target[0] - self.cx
        dy = target[1] - self.cy
        if dx == 0.0 and dy == 0.0:
            return (self.right, self.cy)
        tx = self.half_w / abs(dx) if dx != 0.0 else math.inf
        ty = self.half_h / abs(dy) if dy != 0.0 else math.inf
        t = min(tx, ty)
        return (self.cx + dx * t, self.cy + dy * t)

    def clamp_to_boundary(self, p: Point) -> Point:
        """Nearest point on the rectangle's perimeter to an interior point."""
        x = min(max(p[0], self.left), self.right)
        y = min(max(p[1], self.top), self.bottom)
        gaps = (
            (x - self.left, (self.left, y)),
            (self.right - x, (self.right, y)),
            (y - self.top, (x, self.top)),
            (self.bottom - y, (x, self.bottom)),
        )
        return min(gaps, key=lambda g: g[0])[1]


def dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def midpoint(a: Point, b: Point) -> Point:
    return ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)


def project_onto_bisector(point: Point, a: Point, b: Point) -> Point:
    """Project a point onto the perpendicular bisector of segment ab.

    The bisector is the locus of valid circle centers through both a and
    b; projecting yields the nearest center that admits an arc through
    the pair.
    """
    m = midpoint(a, b)
    dx, dy = b[0] - a[0], b[1] - a[1]
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        return point
    # Unit direction of the bisector is the chord normal.
    nx, ny = -dy / norm, dx / norm
    t = (point[0] - m[0]) * nx + (point[1] - m[1]) * ny
    return (m[0] + t * nx, m[1] + t * ny)
