"""SVG 1.1 rendering of assembled diagrams.

Output is byte-reproducible: entities are emitted in element-id order,
links afterwards in their stored order, and every coordinate is
formatted with two fixed decimals.
"""

from __future__ import annotations

import math

from .arcs import ARC, PAIRED_ARC, ArcSpec
from .diagram import Diagram, Entity
from .geometry import TEXT_HEIGHT

PAD = 40.0
FONT = "font-family=\"Helvetica, Arial, sans-serif\" font-size=\"11\""

STYLE = {
    "stock": ("#ffffff", "#1a1a1a"),
    "module": ("#f2f4f8", "#3a4a6b"),
}


def _f(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _arc_extremes(link: ArcSpec) -> list[tuple[float, float]]:
    """Points bounding the traversed (minor) arc: endpoints plus any
    cardinal extreme of the circle the sweep actually passes through."""
    cx, cy = link.center
    r = link.radius
    a1 = math.atan2(link.start[1] - cy, link.start[0] - cx)
    a2 = math.atan2(link.end[1] - cy, link.end[0] - cx)
    if link.sweep == 1:
        span = (a2 - a1) % (2.0 * math.pi)
        origin = a1
    else:
        span = (a1 - a2) % (2.0 * math.pi)
        origin = a2
    points = [link.start, link.end]
    for k in range(4):
        theta = k * math.pi / 2.0
        if (theta - origin) % (2.0 * math.pi) <= span:
            points.append((cx + r * math.cos(theta), cy + r * math.sin(theta)))
    return points


def _bounds(d: Diagram) -> tuple[float, float, float, float]:
    xs: list[float] = []
    ys: list[float] = []
    for e in d.entities:
        xs.extend((e.x - e.half_w, e.x + e.half_w))
        ys.extend((e.y - e.half_h, e.y + e.half_h + TEXT_HEIGHT))
        if e.polyline:
            for x, y in e.polyline:
                xs.append(x)
                ys.append(y)
    for link in d.links:
        points = [link.start, link.end]
        if link.kind in (ARC, PAIRED_ARC) and link.center is not None:
            points = _arc_extremes(link)
        for x, y in points:
            xs.append(x)
            ys.append(y)
    if not xs:
        xs, ys = [0.0], [0.0]
    return min(xs) - PAD, min(ys) - PAD, max(xs) + PAD, max(ys) + PAD


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _label(x: float, y: float, text: str) -> str:
    return (f'<text x="{_f(x)}" y="{_f(y)}" text-anchor="middle" {FONT} '
            f'fill="#1a1a1a">{_escape(text)}</text>')


def _render_entity(e: Entity) -> list[str]:
    parts: list[str] = []
    if e.shape == "stock":
        fill, stroke = STYLE["stock"]
        parts.append(
            f'<rect x="{_f(e.x - e.half_w)}" y="{_f(e.y - e.half_h)}" '
            f'width="{_f(2 * e.half_w)}" height="{_f(2 * e.half_h)}" '
            f'fill="{fill}" stroke="{stroke}" stroke-width="1.5"/>')
        parts.append(_label(e.x, e.y + e.half_h + TEXT_HEIGHT, e.label))
    elif e.shape == "flow":
        if e.polyline:
            pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in e.polyline)
            parts.append(f'<polyline points="{pts}" fill="none" '
                         f'stroke="#1a1a1a" stroke-width="5"/>')
            parts.append(f'<polyline points="{pts}" fill="none" '
                         f'stroke="#ffffff" stroke-width="3"/>')
            end_x, end_y = e.polyline[-1]
            prev_x, prev_y = e.polyline[-2]
            sign = 1.0 if end_x >= prev_x else -1.0
            parts.append(
                f'<path d="M {_f(end_x)} {_f(end_y - 6)} L {_f(end_x + sign * 8)} '
                f'{_f(end_y)} L {_f(end_x)} {_f(end_y + 6)} Z" fill="#1a1a1a"/>')
        v = e.half_w  # valve glyph: bow tie at the flow's regulation point
        parts.append(
            f'<path d="M {_f(e.x - v)} {_f(e.y - v)} L {_f(e.x + v)} {_f(e.y + v)} '
            f'L {_f(e.x + v)} {_f(e.y - v)} L {_f(e.x - v)} {_f(e.y + v)} Z" '
            f'fill="#ffffff" stroke="#1a1a1a" stroke-width="1.2"/>')
        parts.append(_label(e.x, e.y + v + TEXT_HEIGHT, e.label))
    elif e.shape == "aux":
        parts.append(
            f'<circle cx="{_f(e.x)}" cy="{_f(e.y)}" r="{_f(e.half_w)}" '
            f'fill="#ffffff" stroke="#1a1a1a" stroke-width="1.2"/>')
        parts.append(_label(e.x, e.y + e.half_h + TEXT_HEIGHT, e.label))
    elif e.shape == "module":
        fill, stroke = STYLE["module"]
        parts.append(
            f'<rect x="{_f(e.x - e.half_w)}" y="{_f(e.y - e.half_h)}" '
            f'width="{_f(2 * e.half_w)}" height="{_f(2 * e.half_h)}" rx="6" '
            f'fill="{fill}" stroke="{stroke}" stroke-width="1.5"/>')
        parts.append(_label(e.x, e.y + 4.0, e.label))
    elif e.shape == "cloud":
        parts.append(
            f'<ellipse cx="{_f(e.x)}" cy="{_f(e.y)}" rx="{_f(e.half_w)}" '
            f'ry="{_f(e.half_h * 0.75)}" fill="#ffffff" stroke="#8a8a8a" '
            f'stroke-width="1.2" stroke-dasharray="4 3"/>')
    return parts


def _render_link(link: ArcSpec) -> str:
    x1, y1 = link.start
    x2, y2 = link.end
    if link.kind in (ARC, PAIRED_ARC) and link.center is not None:
        r = _f(link.radius)
        d = (f"M {_f(x1)} {_f(y1)} A {r} {r} 0 0 {link.sweep} "
             f"{_f(x2)} {_f(y2)}")
    else:
        d = f"M {_f(x1)} {_f(y1)} L {_f(x2)} {_f(y2)}"
    return (f'<path d="{d}" fill="none" stroke="#3a6ea5" stroke-width="1.2" '
            f'marker-end="url(#arrow)"/>')


def render_svg(d: Diagram) -> str:
    """Render one module diagram as a standalone SVG document."""
    x0, y0, x1, y1 = _bounds(d)
    width, height = x1 - x0, y1 - y0
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="{_f(x0)} {_f(y0)} {_f(width)} {_f(height)}">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" '
        'markerWidth="7" markerHeight="7" orient="auto-start-reverse">'
        '<path d="M 0 0 L 10 5 L 0 10 Z" fill="#3a6ea5"/></marker></defs>',
        f'<title>{_escape(d.label)}</title>',
    ]
    for e in sorted(d.entities, key=lambda e: e.element_id):
        lines.extend(_render_entity(e))
    for link in d.links:
        lines.append(_render_link(link))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
