"""Feedback-aware link geometry.

A link that sits on a feedback loop of three or more nodes is drawn as
a circular arc around that loop: the arc's center is the loop's node
centroid projected onto the chord's perpendicular bisector (the nearest
center admitting an arc through both attachment points). A link whose
only loop is a two-cycle gets one of a pair of mirror-symmetric shallow
arcs, and a link on no loop stays straight.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Point, dist, midpoint, project_onto_bisector
from .graph import DirectedGraph, shortest_feedback_loop_through

STRAIGHT = "straight"
ARC = "arc"
PAIRED_ARC = "paired-arc"


@dataclass
class ArcSpec:
    """Resolved geometry for one drawn link."""

    source: str                 # layout node id
    target: str
    kind: str                   # straight | arc | paired-arc
    start: Point
    end: Point
    center: Point | None = None
    radius: float | None = None
    sweep: int = 0              # SVG sweep flag for the minor arc
    loop_nodes: tuple[str, ...] = ()
    source_element: str = ""    # entity the link actually touches
    target_element: str = ""

    def chord_length(self) -> float:
        return dist(self.start, self.end)


def _sweep_flag(center: Point, start: Point, end: Point) -> int:
    """Sweep direction that traverses the minor arc from start to end."""
    ax, ay = start[0] - center[0], start[1] - center[1]
    bx, by = end[0] - center[0], end[1] - center[1]
    return 1 if (ax * by - ay * bx) > 0.0 else 0


def loop_arc(start: Point, end: Point, loop_centroid: Point) -> tuple[Point, float, int]:
    """Arc through both attachment points around a loop's centroid."""
    center = project_onto_bisector(loop_centroid, start, end)
    radius = (dist(center, start) + dist(center, end)) / 2.0
    return center, radius, _sweep_flag(center, start, end)


def bulge_arc(start: Point, end: Point, bulge_frac: float,
              side: int) -> tuple[Point, float, int]:
    """Shallow arc bulging to one side of the chord.

    The sagitta is ``bulge_frac`` of the chord length; ``side`` +1 bulges
    left of the travel direction, -1 right, so the two directions of a
    reciprocal pair land on opposite sides.
    """
    chord = dist(start, end)
    if chord == 0.0:
        raise ValueError("cannot curve a zero-length link")
    s = bulge_frac * chord
    radius = (s * s + (chord / 2.0) ** 2) / (2.0 * s)
    dx, dy = end[0] - start[0], end[1] - start[1]
    nx, ny = -dy / chord * side, dx / chord * side
    m = midpoint(start, end)
    center = (m[0] - nx * (radius - s), m[1] - ny * (radius - s))
    return center, radius, _sweep_flag(center, start, end)


@dataclass
class LinkEndpoints:
    """Attachment data for one layout edge, prepared by diagram assembly."""

    source: str
    target: str
    start: Point
    end: Point
    source_element: str = ""
    target_element: str = ""


def curve_edges(links: list[LinkEndpoints], node_ids: list[str],
                edges: list[tuple[str, str]], node_centers: dict[str, Point],
                bulge_frac: float = 0.15, min_loop_len: int = 3) -> list[ArcSpec]:
    """Assign straight / arc / paired-arc geometry to every link.

    ``edges`` is the module-level directed edge set used for loop
    detection; ``node_centers`` supplies the positions whose centroid
    defines each arc's center.
    """
    g = DirectedGraph.from_named_edges(node_ids, edges)
    edge_set = set(edges)
    out: list[ArcSpec] = []
    for link in links:
        spec = ArcSpec(
            source=link.source, target=link.target, kind=STRAIGHT,
            start=link.start, end=link.end,
            source_element=link.source_element or link.source,
            target_element=link.target_element or link.target,
        )
        u, v = g.index[link.source], g.index[link.target]
        loop = shortest_feedback_loop_through(g, (u, v), min_len=min_loop_len)
        degenerate = dist(link.start, link.end) < 1e-9
        if loop is not None and not degenerate:
            names = tuple(node_ids[i] for i in loop.nodes)
            cx = sum(node_centers[n][0] for n in names) / len(names)
            cy = sum(node_centers[n][1] for n in names) / len(names)
            spec.kind = ARC
            spec.center, spec.radius, spec.sweep = loop_arc(link.start, link.end, (cx, cy))
            spec.loop_nodes = names
        elif (link.target, link.source) in edge_set and not degenerate:
            spec.kind = PAIRED_ARC
            spec.center, spec.radius, spec.sweep = bulge_arc(
                link.start, link.end, bulge_frac, side=+1)
        out.append(spec)
    return out
