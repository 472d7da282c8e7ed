"""Node overlap removal: separation-constraint QP and Voronoi spreading.

The constraint method runs two one-dimensional problems, horizontal
first then vertical: each pass minimizes total squared displacement
along that axis subject to pairwise separation constraints, solved by
incremental block merging. The horizontal pass separates pairs that are
cheaper to split sideways; the vertical pass then constrains every pair
whose horizontal projections still overlap, which guarantees zero
remaining intersections.

The Voronoi method iteratively moves every node to the centroid of its
bounded Voronoi cell until no rectangles intersect, growing the bounds
when an iteration cap is hit.
"""

from __future__ import annotations

import math

from .geometry import Point, Rect
from .stress import SizedNode

Constraint = tuple[int, int, float]  # v[j] - v[i] >= gap


def solve_separation(desired: list[float], constraints: list[Constraint],
                     slack: float = 1e-9) -> list[float]:
    """Minimize total squared displacement subject to separation constraints.

    Constraints must point forward in the (desired value, index) total
    order, which makes them acyclic. Variables are processed in that
    order; each one's block repeatedly merges across its most violated
    incoming constraint, and every block sits at the least-squares
    position of its members. A final scan re-enforces every constraint
    with a tiny slack so rounding in the block arithmetic can never
    leave a residual violation.
    """
    n = len(desired)
    order = sorted(range(n), key=lambda i: (desired[i], i))
    rank = {v: r for r, v in enumerate(order)}
    incoming: list[list[Constraint]] = [[] for _ in range(n)]
    for i, j, gap in constraints:
        if rank[i] >= rank[j]:
            raise ValueError("constraints must follow the (value, index) order")
        incoming[j].append((i, j, gap))

    block_of = list(range(n))
    members: dict[int, list[int]] = {i: [i] for i in range(n)}
    posn: dict[int, float] = {i: desired[i] for i in range(n)}
    offset = [0.0] * n

    def position(v: int) -> float:
        return posn[block_of[v]] + offset[v]

    for v in order:
        while True:
            b = block_of[v]
            worst = None
            for w in members[b]:
                for (u, _, gap) in incoming[w]:
                    if block_of[u] == b:
                        continue
                    violation = position(u) + gap - position(w)
                    if violation > 1e-12 and (worst is None or violation > worst[0]):
                        worst = (violation, u, w, gap)
            if worst is None:
                break
            _, u, w, gap = worst
            bu, bw = block_of[u], block_of[w]
            shift = offset[u] + gap - offset[w]
            for k in members[bw]:
                offset[k] += shift
                block_of[k] = bu
            members[bu].extend(members.pop(bw))
            posn.pop(bw)
            posn[bu] = sum(desired[k] - offset[k] for k in members[bu]) / len(members[bu])

    out = [position(v) for v in range(n)]
    for v in order:
        for (u, _, gap) in incoming[v]:
            bound = out[u] + gap
            if out[v] < bound + slack:
                out[v] = bound + slack
    return out


def _overlap_amounts(a: SizedNode, b: SizedNode) -> tuple[float, float]:
    xo = (a.half_w + b.half_w) - abs(a.x - b.x)
    yo = (a.half_h + b.half_h) - abs(a.y - b.y)
    return xo, yo


def remove_overlaps_vpsc(nodes: list[SizedNode]) -> list[SizedNode]:
    """Separate rectangles with a horizontal pass then a vertical pass."""
    nodes = [n.moved(n.x, n.y) for n in nodes]
    if len(nodes) < 2:
        return nodes

    # Horizontal: constrain overlapping pairs that need less x movement.
    cons: list[Constraint] = []
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            xo, yo = _overlap_amounts(nodes[i], nodes[j])
            if xo > 0.0 and yo > 0.0 and xo <= yo:
                left, right = sorted((i, j), key=lambda k: (nodes[k].x, k))
                cons.append((left, right, nodes[left].half_w + nodes[right].half_w))
    if cons:
        xs = solve_separation([n.x for n in nodes], cons)
        for n, x in zip(nodes, xs):
            n.x = x

    # Vertical: constrain every pair whose x projections still overlap.
    # Satisfied constraints are inert, so overlap-free pairs don't move.
    cons = []
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            xo, _ = _overlap_amounts(nodes[i], nodes[j])
            if xo > 0.0:
                lo, hi = sorted((i, j), key=lambda k: (nodes[k].y, k))
                cons.append((lo, hi, nodes[lo].half_h + nodes[hi].half_h))
    if cons:
        ys = solve_separation([n.y for n in nodes], cons)
        for n, y in zip(nodes, ys):
            n.y = y
    return nodes


def count_overlaps(nodes: list[SizedNode]) -> int:
    total = 0
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if nodes[i].rect.overlaps(nodes[j].rect):
                total += 1
    return total


def default_bounds(nodes: list[SizedNode]) -> Rect:
    """Rectangle enclosing all node boxes, expanded by the largest extent."""
    left = min(n.x - n.half_w for n in nodes)
    right = max(n.x + n.half_w for n in nodes)
    top = min(n.y - n.half_h for n in nodes)
    bottom = max(n.y + n.half_h for n in nodes)
    pad = max(max(n.half_w, n.half_h) for n in nodes) * 2.0
    cx, cy = (left + right) / 2.0, (top + bottom) / 2.0
    return Rect(cx, cy, (right - left) / 2.0 + pad, (bottom - top) / 2.0 + pad)


def _clip_halfplane(poly: list[Point], nx: float, ny: float, c: float) -> list[Point]:
    """Keep the part of a convex polygon with nx*x + ny*y <= c."""
    out: list[Point] = []
    k = len(poly)
    for idx in range(k):
        ax, ay = poly[idx]
        bx, by = poly[(idx + 1) % k]
        da = nx * ax + ny * ay - c
        db = nx * bx + ny * by - c
        if da <= 0.0:
            out.append((ax, ay))
        if (da < 0.0) != (db < 0.0):
            t = da / (da - db)
            out.append((ax + t * (bx - ax), ay + t * (by - ay)))
    return out


def _voronoi_cell(i: int, points: list[Point], bounds: Rect) -> list[Point]:
    poly: list[Point] = [
        (bounds.left, bounds.top), (bounds.right, bounds.top),
        (bounds.right, bounds.bottom), (bounds.left, bounds.bottom),
    ]
    px, py = points[i]
    neighbors = sorted(
        (j for j in range(len(points)) if j != i),
        key=lambda j: ((points[j][0] - px) ** 2 + (points[j][1] - py) ** 2, j),
    )
    for j in neighbors:
        if not poly:
            break
        qx, qy = points[j]
        d2 = (qx - px) ** 2 + (qy - py) ** 2
        radius2 = max((vx - px) ** 2 + (vy - py) ** 2 for vx, vy in poly)
        if d2 >= 4.0 * radius2:
            break  # remaining bisectors cannot cut the cell
        nx, ny = qx - px, qy - py
        c = nx * (px + qx) / 2.0 + ny * (py + qy) / 2.0
        poly = _clip_halfplane(poly, nx, ny, c)
    return poly


def _centroid(poly: list[Point], fallback: Point) -> Point:
    if len(poly) < 3:
        return fallback
    area2 = 0.0
    cx = 0.0
    cy = 0.0
    for k in range(len(poly)):
        ax, ay = poly[k]
        bx, by = poly[(k + 1) % len(poly)]
        cross = ax * by - bx * ay
        area2 += cross
        cx += (ax + bx) * cross
        cy += (ay + by) * cross
    if abs(area2) < 1e-12:
        return (sum(p[0] for p in poly) / len(poly), sum(p[1] for p in poly) / len(poly))
    return (cx / (3.0 * area2), cy / (3.0 * area2))


def _separate_coincident(points: list[Point]) -> list[Point]:
    """Deterministically jitter exact duplicates so cells are distinct."""
    seen: dict[Point, int] = {}
    out: list[Point] = []
    for idx, p in enumerate(points):
        count = seen.get(p, 0)
        seen[p] = count + 1
        if count == 0:
            out.append(p)
        else:
            angle = 2.39996 * count + 0.7548 * idx  # golden-angle spiral
            eps = 1e-3 * count
            out.append((p[0] + eps * math.cos(angle), p[1] + eps * math.sin(angle)))
    return out


def remove_overlaps_voronoi(nodes: list[SizedNode], bounds: Rect | None = None,
                            iteration_cap: int = 200,
                            expand_factor: float = 0.2) -> list[SizedNode]:
    """Spread nodes by repeated moves to their Voronoi cell centers.

    Stops as soon as no rectangles intersect. If the cap is hit the
    bounds grow by the expansion factor and iteration resumes, since a
    too-tight box can make separation impossible.
    """
    nodes = [n.moved(n.x, n.y) for n in nodes]
    if len(nodes) < 2:
        return nodes
    if bounds is None:
        bounds = default_bounds(nodes)
    else:
        bounds = Rect(bounds.cx, bounds.cy, bounds.half_w, bounds.half_h)

    iterations = 0
    while count_overlaps(nodes) > 0:
        if iterations >= iteration_cap:
            bounds = Rect(bounds.cx, bounds.cy,
                          bounds.half_w * (1.0 + expand_factor),
                          bounds.half_h * (1.0 + expand_factor))
            iterations = 0
        points = _separate_coincident([(n.x, n.y) for n in nodes])
        for i, node in enumerate(nodes):
            cell = _voronoi_cell(i, points, bounds)
            node.x, node.y = _centroid(cell, points[i])
        iterations += 1
    return nodes
