"""Stock-flow main chains: detection, interior layout, edge redirection.

A main chain is a maximal group of stocks connected through shared
flows. Each chain is laid out on its own grid in a private coordinate
frame, then participates in the module-level layout as a single node;
dependency edges touching chain members are re-pointed at the chain
node, remembering the true endpoint for later re-attachment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import ChainLayoutParams, Point
from .model import FlowDirection, Kind, ModelGraph


@dataclass
class FlowPolyline:
    """Axis-aligned flow pipe: 2 points (straight) or 4 points (S shape)."""

    points: tuple[Point, ...]
    source_side: str = "right"
    sink_side: str = "left"

    def __post_init__(self) -> None:
        if len(self.points) not in (2, 4):
            raise ValueError("flow polyline must have 2 or 4 points")

    @property
    def midpoint(self) -> Point:
        if len(self.points) == 2:
            (x1, y1), (x2, y2) = self.points
            return ((x1 + x2) / 2.0, (y1 + y2) / 2.0)
        # Valve sits on the middle (vertical) segment of the S.
        xm = self.points[1][0]
        return (xm, (self.points[1][1] + self.points[2][1]) / 2.0)


@dataclass
class MainChainNode:
    """An agglomerated stock-flow chain with its own coordinate frame."""

    node_id: str
    stocks: list[str]
    flows: list[str]
    # flow -> (upstream stock or None, downstream stock or None)
    attachments: dict[str, tuple[str | None, str | None]]
    first_index: int
    decl_index: dict[str, int]
    internal_pos: dict[str, Point] = field(default_factory=dict)
    polylines: dict[str, FlowPolyline] = field(default_factory=dict)
    clouds: list[tuple[str, Point]] = field(default_factory=list)
    half_extent: tuple[float, float] = (0.0, 0.0)

    @property
    def members(self) -> set[str]:
        return set(self.stocks) | set(self.flows)

    def bounding_box(self) -> tuple[float, float]:
        return (2.0 * self.half_extent[0], 2.0 * self.half_extent[1])


def detect_main_chains(model: ModelGraph) -> list[MainChainNode]:
    """Group stocks and their attached flows into main chains.

    Chains are connected components of the stock-flow incidence graph;
    every stock lands in exactly one chain, stocks without stock-to-stock
    connections (or without flows at all) forming singleton chains.
    """
    up: dict[str, str] = {}
    down: dict[str, str] = {}
    stock_flows: dict[str, list[str]] = {s.name: [] for s in model.stocks()}
    for flow, stock, direction in model.sorted_flow_links():
        if direction is FlowDirection.OUT_OF:
            up[flow] = stock
        else:
            down[flow] = stock
    decl_index = {v.name: i for i, v in enumerate(model.variables)}
    flow_rank = lambda f: decl_index[f]
    for flow in sorted(set(up) | set(down), key=flow_rank):
        for stock in (up.get(flow), down.get(flow)):
            if stock is not None and flow not in stock_flows[stock]:
                stock_flows[stock].append(flow)

    chains: list[MainChainNode] = []
    visited: set[str] = set()
    for stock in model.stocks():
        if stock.name in visited:
            continue
        member_stocks = [stock.name]
        member_flows: list[str] = []
        visited.add(stock.name)
        frontier = [stock.name]
        while frontier:
            s = frontier.pop(0)
            for f in stock_flows[s]:
                if f not in member_flows:
                    member_flows.append(f)
                for other in (up.get(f), down.get(f)):
                    if other is not None and other not in visited:
                        visited.add(other)
                        member_stocks.append(other)
                        frontier.append(other)
        member_flows.sort(key=flow_rank)
        attachments = {f: (up.get(f), down.get(f)) for f in member_flows}
        first = min(decl_index[m] for m in member_stocks + member_flows)
        chains.append(MainChainNode(
            node_id=f"chain:{stock.name}",
            stocks=member_stocks,
            flows=member_flows,
            attachments=attachments,
            first_index=first,
            decl_index={m: decl_index[m] for m in member_stocks + member_flows},
        ))
    return chains


def _central_stock(chain: MainChainNode) -> str:
    """Stock with the smallest average hop distance over the flows-only graph."""
    adj: dict[str, set[str]] = {s: set() for s in chain.stocks}
    for a, b in chain.attachments.values():
        if a is not None and b is not None:
            adj[a].add(b)
            adj[b].add(a)
    best = None
    for s in sorted(chain.stocks, key=lambda x: chain.decl_index[x]):
        dist = {s: 0}
        frontier = [s]
        while frontier:
            cur = frontier.pop(0)
            for nxt in sorted(adj[cur], key=lambda x: chain.decl_index[x]):
                if nxt not in dist:
                    dist[nxt] = dist[cur] + 1
                    frontier.append(nxt)
        total = sum(dist.values())
        if best is None or total < best[0]:
            best = (total, s)
    return best[1]


def layout_main_chain(chain: MainChainNode, params: ChainLayoutParams = ChainLayoutParams()) -> MainChainNode:
    """Place the chain's stocks on a grid and route its flows.

    The most central stock sits at the frame origin; upstream stocks go
    one fixed column to the left, downstream one to the right, each side
    centered vertically on its candidate stock with one slot reserved
    per flow (blank slots are kept for flows with no stock on the far
    end). Already-placed stocks are never moved, so cycles close with a
    final flow routed between existing positions.
    """
    if not chain.stocks:
        raise ValueError("cannot lay out an empty chain")
    slot_h = params.stock_height + params.row_spacing
    pos: dict[str, Point] = {}
    central = _central_stock(chain)
    pos[central] = (0.0, 0.0)
    queue = [central]
    while queue:
        cand = queue.pop(0)
        cx, cy = pos[cand]
        inflows = [f for f in chain.flows if chain.attachments[f][1] == cand]
        outflows = [f for f in chain.flows if chain.attachments[f][0] == cand]
        for side_flows, direction in ((inflows, -1.0), (outflows, +1.0)):
            k = len(side_flows)
            if k == 0:
                continue
            x = cx + direction * params.column_width
            y_start = cy - (k * slot_h) / 2.0 + slot_h / 2.0
            for i, f in enumerate(side_flows):
                other = chain.attachments[f][0] if direction < 0 else chain.attachments[f][1]
                if other is None or other in pos:
                    continue  # blank slot stays reserved
                pos[other] = (x, y_start + i * slot_h)
                queue.append(other)

    chain.internal_pos = dict(pos)
    _route_chain_flows(chain, params)

    xs: list[float] = []
    ys: list[float] = []
    half_w, half_h = params.stock_width / 2.0, params.stock_height / 2.0
    for s in chain.stocks:
        x, y = chain.internal_pos[s]
        xs.extend((x - half_w, x + half_w))
        ys.extend((y - half_h, y + half_h))
    for line in chain.polylines.values():
        for x, y in line.points:
            xs.append(x)
            ys.append(y)
    for _, (x, y) in chain.clouds:
        xs.extend((x - params.row_spacing / 2.0, x + params.row_spacing / 2.0))
        ys.extend((y - params.row_spacing / 2.0, y + params.row_spacing / 2.0))
    # Symmetric hull about the frame origin, so the origin can map onto
    # the layout node's center, plus the shared margin.
    hx = max(abs(v) for v in xs) + params.margin
    hy = max(abs(v) for v in ys) + params.margin
    chain.half_extent = (hx, hy)
    return chain


def _side_offsets(flows: list[str], pitch: float) -> dict[str, float]:
    k = len(flows)
    return {f: (i - (k - 1) / 2.0) * pitch for i, f in enumerate(flows)}


def _route_chain_flows(chain: MainChainNode, params: ChainLayoutParams) -> None:
    """Attach every member flow, spreading shared stock sides apart."""
    half_w = params.stock_width / 2.0
    out_off: dict[str, dict[str, float]] = {}
    in_off: dict[str, dict[str, float]] = {}
    for s in chain.stocks:
        outs = [f for f in chain.flows if chain.attachments[f][0] == s]
        ins = [f for f in chain.flows if chain.attachments[f][1] == s]
        out_off[s] = _side_offsets(outs, params.flow_pitch)
        in_off[s] = _side_offsets(ins, params.flow_pitch)

    chain.polylines = {}
    chain.clouds = []
    for f in chain.flows:
        src_stock, dst_stock = chain.attachments[f]
        if src_stock is not None:
            sx, sy = chain.internal_pos[src_stock]
            src = (sx + half_w, sy + out_off[src_stock][f])
        else:
            src = None
        if dst_stock is not None:
            dx, dy = chain.internal_pos[dst_stock]
            dst = (dx - half_w, dy + in_off[dst_stock][f])
        else:
            dst = None
        if src is None:
            # Source cloud half a column out from the receiving stock.
            src = (dst[0] - params.column_width / 2.0, dst[1])
            chain.clouds.append((f, src))
        elif dst is None:
            dst = (src[0] + params.column_width / 2.0, src[1])
            chain.clouds.append((f, dst))
        line = route_flow(f, src, dst, params)
        chain.polylines[f] = line
        chain.internal_pos[f] = line.midpoint


def route_flow(flow: str, source_pos: Point, sink_pos: Point,
               geometry: ChainLayoutParams = ChainLayoutParams()) -> FlowPolyline:
    """Axis-aligned pipe between two attachment points.

    Equal heights give one straight horizontal segment; otherwise the
    pipe is four points in a horizontal-vertical-horizontal S, jogging
    at the midpoint between the attachment columns.
    """
    x1, y1 = source_pos
    x2, y2 = sink_pos
    if y1 == y2:
        return FlowPolyline(points=((x1, y1), (x2, y2)))
    xm = (x1 + x2) / 2.0
    return FlowPolyline(points=((x1, y1), (xm, y1), (xm, y2), (x2, y2)))


@dataclass
class LayoutNode:
    """One node of the reduced layout graph: a plain variable or a chain."""

    node_id: str
    kind: Kind | None            # None marks a chain node
    chain: MainChainNode | None = None
    first_index: int = 0

    @property
    def is_chain(self) -> bool:
        return self.chain is not None

    @property
    def label(self) -> str:
        return self.node_id


@dataclass
class LayoutGraph:
    """Reduced graph after chain agglomeration.

    ``edges`` maps each redirected (source node, target node) pair to the
    original dependency endpoints it stands for, so links can be
    re-attached to real elements after layout.
    """

    nodes: list[LayoutNode]
    edges: dict[tuple[str, str], list[tuple[str, str]]]
    internal_dropped: int
    duplicates_collapsed: int
    owner: dict[str, str]

    def __post_init__(self) -> None:
        self.index = {n.node_id: i for i, n in enumerate(self.nodes)}

    @property
    def node_ids(self) -> list[str]:
        return [n.node_id for n in self.nodes]

    def node(self, node_id: str) -> LayoutNode:
        return self.nodes[self.index[node_id]]

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [(self.index[a], self.index[b]) for a, b in self.edges]

    def undirected_pairs(self) -> list[tuple[int, int]]:
        """Distinct undirected index pairs; reciprocal edges collapse."""
        seen: list[tuple[int, int]] = []
        have: set[tuple[int, int]] = set()
        for a, b in self.edge_pairs():
            key = (min(a, b), max(a, b))
            if a != b and key not in have:
                have.add(key)
                seen.append(key)
        return seen


def redirect_edges(model: ModelGraph, chains: list[MainChainNode]) -> LayoutGraph:
    """Re-point chain members' dependency edges at their chain nodes.

    Edges internal to one chain are dropped; remapped edges that land on
    the same node pair collapse, remembering every original endpoint
    pair they stand for.
    """
    owner: dict[str, str] = {}
    for c in chains:
        for m in c.members:
            owner[m] = c.node_id

    nodes: list[LayoutNode] = []
    for i, v in enumerate(model.variables):
        if v.name not in owner:
            owner[v.name] = v.name
            nodes.append(LayoutNode(v.name, v.kind, first_index=i))
    for c in chains:
        nodes.append(LayoutNode(c.node_id, None, chain=c, first_index=c.first_index))
    nodes.sort(key=lambda n: n.first_index)

    edges: dict[tuple[str, str], list[tuple[str, str]]] = {}
    internal = 0
    dups = 0
    for src, dst in model.sorted_dep_edges():
        a, b = owner[src], owner[dst]
        if a == b:
            internal += 1
            continue
        key = (a, b)
        if key in edges:
            dups += 1
        edges.setdefault(key, []).append((src, dst))
    return LayoutGraph(nodes, edges, internal, dups, owner)
