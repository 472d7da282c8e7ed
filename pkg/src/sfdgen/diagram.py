"""Final diagram assembly: sizing, anchoring, chain explosion.

After the module-level layout fixes every layout node's position, the
agglomerated chains are exploded back into their member stocks, flows
and clouds (chain frame origin at the chain node's center), and every
redirected link is re-attached to the boundary anchor of the element it
originally pointed at.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arcs import ArcSpec, LinkEndpoints, curve_edges
from .community import Module
from .geometry import (AUX_RADIUS, CHAR_WIDTH, CLOUD_RADIUS, VALVE_SIZE,
                       ChainLayoutParams, LayoutParams, Point, text_extent)
from .mainchain import LayoutNode
from .model import Kind
from .stress import SizedNode


@dataclass
class Entity:
    """One drawable element with its final module-frame geometry."""

    element_id: str
    shape: str                  # stock | flow | aux | module | cloud
    x: float
    y: float
    half_w: float
    half_h: float
    label: str = ""
    polyline: tuple[Point, ...] | None = None
    module_ref: int | None = None


@dataclass
class Diagram:
    module_id: int
    label: str
    entities: list[Entity] = field(default_factory=list)
    links: list[ArcSpec] = field(default_factory=list)
    # Layout-node rectangles (x, y, half_w, half_h) the links anchor to;
    # kept for geometry checks, not rendered.
    node_rects: dict[str, tuple[float, float, float, float]] = field(default_factory=dict)

    def entity(self, element_id: str) -> Entity:
        for e in self.entities:
            if e.element_id == element_id:
                return e
        raise KeyError(element_id)


def _symbol_dims(kind: Kind, cp: ChainLayoutParams) -> tuple[float, float]:
    if kind is Kind.STOCK:
        return cp.stock_width, cp.stock_height
    if kind is Kind.FLOW:
        return 2.0 * VALVE_SIZE, 2.0 * VALVE_SIZE
    return 2.0 * AUX_RADIUS, 2.0 * AUX_RADIUS


def sized_node_for(node: LayoutNode, cp: ChainLayoutParams) -> SizedNode:
    """Layout footprint: symbol plus variable name plus the size margin.

    Chain nodes already carry their bounding box (member union plus
    margin) from the interior layout.
    """
    if node.is_chain:
        hw, hh = node.chain.half_extent
        return SizedNode(node.node_id, hw, hh)
    sym_w, sym_h = _symbol_dims(node.kind, cp)
    text_w, text_h = text_extent(node.label)
    half_w = max(sym_w, text_w) / 2.0 + cp.margin
    half_h = (sym_h + text_h) / 2.0 + cp.margin
    return SizedNode(node.node_id, half_w, half_h)


def module_placeholder(module: Module, cp: ChainLayoutParams) -> SizedNode:
    width = max(120.0, len(module.label) * CHAR_WIDTH + 24.0)
    return SizedNode(f"module:{module.module_id}", width / 2.0 + cp.margin,
                     40.0 + cp.margin)


def element_module_position(chain_node: SizedNode, internal: Point) -> Point:
    """Chain frame origin maps onto the chain node's center."""
    return (chain_node.x + internal[0], chain_node.y + internal[1])


def _anchor(node: LayoutNode | None, sized: SizedNode, element: str,
            toward: Point) -> Point:
    """Boundary attachment: chain links clamp to the remembered member's
    nearest perimeter point, plain nodes aim at the far endpoint."""
    rect = sized.rect
    if node is not None and node.is_chain and element in node.chain.internal_pos:
        pos = element_module_position(sized, node.chain.internal_pos[element])
        return rect.clamp_to_boundary(pos)
    return rect.boundary_point_toward(toward)


def build_links(edges: dict[tuple[str, str], list[tuple[str, str]]],
                placed: dict[str, SizedNode],
                lookup: dict[str, LayoutNode],
                lp: LayoutParams) -> list[ArcSpec]:
    """Anchor every redirected edge and assign its curve geometry.

    Collapsed duplicate edges are drawn once, anchored through the first
    remembered original endpoint pair.
    """
    node_ids = sorted(placed)
    centers = {nid: (placed[nid].x, placed[nid].y) for nid in node_ids}
    directed = [(a, b) for a, b in edges]
    links: list[LinkEndpoints] = []
    for (a, b), originals in edges.items():
        orig_src, orig_dst = originals[0]
        na, nb = lookup.get(a), lookup.get(b)
        # Anchors depend only on the unordered pair, so the two directions
        # of a reciprocal edge share one chord and their arcs mirror exactly.
        start = _anchor(na, placed[a], orig_src, centers[b])
        end = _anchor(nb, placed[b], orig_dst, centers[a])
        links.append(LinkEndpoints(a, b, start, end,
                                   source_element=orig_src, target_element=orig_dst))
    return curve_edges(links, node_ids, directed, centers,
                       bulge_frac=lp.two_cycle_bulge)


def assemble_module_diagram(module: Module, placed: dict[str, SizedNode],
                            links: list[ArcSpec], lookup: dict[str, LayoutNode],
                            cp: ChainLayoutParams) -> Diagram:
    """Explode chains into member entities and collect the final diagram."""
    diagram = Diagram(module.module_id, module.label)
    diagram.node_rects = {nid: (s.x, s.y, s.half_w, s.half_h)
                          for nid, s in sorted(placed.items())}
    for node_id in sorted(placed):
        sized = placed[node_id]
        node = lookup[node_id]
        if not node.is_chain:
            shape = {Kind.STOCK: "stock", Kind.FLOW: "flow"}.get(node.kind, "aux")
            sym_w, sym_h = _symbol_dims(node.kind, cp)
            diagram.entities.append(Entity(
                node_id, shape, sized.x, sized.y, sym_w / 2.0, sym_h / 2.0,
                label=node_id))
            continue
        chain = node.chain
        for stock in chain.stocks:
            x, y = element_module_position(sized, chain.internal_pos[stock])
            diagram.entities.append(Entity(
                stock, "stock", x, y, cp.stock_width / 2.0, cp.stock_height / 2.0,
                label=stock))
        for flow in chain.flows:
            x, y = element_module_position(sized, chain.internal_pos[flow])
            line = chain.polylines[flow]
            moved = tuple(element_module_position(sized, p) for p in line.points)
            diagram.entities.append(Entity(
                flow, "flow", x, y, VALVE_SIZE, VALVE_SIZE,
                label=flow, polyline=moved))
        for flow, point in chain.clouds:
            x, y = element_module_position(sized, point)
            diagram.entities.append(Entity(
                f"cloud:{flow}", "cloud", x, y, CLOUD_RADIUS, CLOUD_RADIUS))
    diagram.links = list(links)
    return diagram


def assemble_parent_diagram(module: Module, placed: dict[str, SizedNode],
                            links: list[ArcSpec],
                            children: dict[str, Module]) -> Diagram:
    """Interior-level diagram: one placeholder per child module."""
    diagram = Diagram(module.module_id, module.label)
    diagram.node_rects = {nid: (s.x, s.y, s.half_w, s.half_h)
                          for nid, s in sorted(placed.items())}
    for node_id in sorted(placed):
        sized = placed[node_id]
        child = children[node_id]
        diagram.entities.append(Entity(
            node_id, "module", sized.x, sized.y, sized.half_w, sized.half_h,
            label=child.label, module_ref=child.module_id))
    diagram.links = list(links)
    return diagram
