"""Community detection for module partitioning.

Implements Newman-Girvan modularity Q, greedy agglomerative clustering
(start from singletons, repeatedly apply the best merge until every
candidate merge would lower Q), divisive clustering by repeated removal
of the highest-betweenness edges, and recursive application with a node
count threshold. Clustering runs on the undirected view of the layout
graph: reciprocal directed edges collapse to one undirected edge and
self-loops are excluded from the accounting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import DirectedGraph, edge_betweenness
from .mainchain import LayoutGraph

Edge = tuple[int, int]


@dataclass
class Partition:
    """Assignment of every node to one community, ids contiguous from 0."""

    assignment: list[int]
    q: float
    degenerate: bool = False

    @property
    def count(self) -> int:
        return max(self.assignment) + 1 if self.assignment else 0

    def communities(self) -> list[list[int]]:
        groups: list[list[int]] = [[] for _ in range(self.count)]
        for node, cid in enumerate(self.assignment):
            groups[cid].append(node)
        return groups


def _relabel(raw: list[int]) -> list[int]:
    """Make community ids contiguous, numbered by first appearance."""
    mapping: dict[int, int] = {}
    out = []
    for cid in raw:
        if cid not in mapping:
            mapping[cid] = len(mapping)
        out.append(mapping[cid])
    return out


def modularity(n: int, edges: list[Edge], assignment: list[int]) -> float:
    """Newman-Girvan Q = sum_i (e_ii - a_i^2) over edge-end fractions."""
    m = len(edges)
    if m == 0:
        raise ValueError("modularity is undefined for an edgeless graph")
    if len(assignment) != n:
        raise ValueError("assignment must cover every node exactly once")
    internal: dict[int, int] = {}
    degree_sum: dict[int, int] = {}
    for u, v in edges:
        if u == v:
            continue
        cu, cv = assignment[u], assignment[v]
        degree_sum[cu] = degree_sum.get(cu, 0) + 1
        degree_sum[cv] = degree_sum.get(cv, 0) + 1
        if cu == cv:
            internal[cu] = internal.get(cu, 0) + 1
    q = 0.0
    for cid in degree_sum:
        e_ii = internal.get(cid, 0) / m
        a_i = degree_sum[cid] / (2.0 * m)
        q += e_ii - a_i * a_i
    return q


class ClusterState:
    """Incremental merge state for greedy agglomeration.

    Tracks, per community, the internal edge count and total degree, and
    the edge counts between each connected community pair, so merge
    gains can be evaluated in O(1) and merges applied without rescanning
    the graph.
    """

    def __init__(self, n: int, edges: list[Edge]):
        self.n = n
        self.m = len(edges)
        self.members: dict[int, list[int]] = {i: [i] for i in range(n)}
        self.degree: dict[int, int] = {i: 0 for i in range(n)}
        self.internal: dict[int, int] = {i: 0 for i in range(n)}
        self.between: dict[Edge, int] = {}
        for u, v in edges:
            if u == v:
                continue
            self.degree[u] += 1
            self.degree[v] += 1
            key = (min(u, v), max(u, v))
            self.between[key] = self.between.get(key, 0) + 1

    def community_ids(self) -> list[int]:
        return sorted(self.members)

    def delta_q(self, i: int, j: int) -> float:
        """Modularity change if communities i and j were merged."""
        if i not in self.members or j not in self.members:
            raise KeyError(f"unknown community id: {i if i not in self.members else j}")
        if i == j:
            raise ValueError("cannot merge a community with itself")
        key = (min(i, j), max(i, j))
        e_ij = self.between.get(key, 0) / (2.0 * self.m)
        a_i = self.degree[i] / (2.0 * self.m)
        a_j = self.degree[j] / (2.0 * self.m)
        return 2.0 * (e_ij - a_i * a_j)

    def merge(self, i: int, j: int) -> int:
        """Merge j into i (keeping the smaller id); returns the kept id."""
        if i > j:
            i, j = j, i
        key = (i, j)
        self.internal[i] += self.internal.pop(j) + self.between.pop(key, 0)
        self.degree[i] += self.degree.pop(j)
        self.members[i].extend(self.members.pop(j))
        for other in list(self.members):
            if other == i:
                continue
            jk = (min(j, other), max(j, other))
            if jk in self.between:
                count = self.between.pop(jk)
                ik = (min(i, other), max(i, other))
                self.between[ik] = self.between.get(ik, 0) + count
        return i

    def assignment(self) -> list[int]:
        raw = [0] * self.n
        for cid, nodes in self.members.items():
            for node in nodes:
                raw[node] = cid
        return _relabel(raw)

    def q(self) -> float:
        if self.m == 0:
            return 0.0
        total = 0.0
        for cid in self.members:
            e_ii = self.internal[cid] / self.m
            a_i = self.degree[cid] / (2.0 * self.m)
            total += e_ii - a_i * a_i
        return total


def delta_q(state: ClusterState, i: int, j: int) -> float:
    return state.delta_q(i, j)


def cnm_cluster(n: int, edges: list[Edge]) -> Partition:
    """Greedy agglomeration from singletons.

    Only community pairs with at least one connecting edge are merge
    candidates; the best gain wins, ties going to the smallest (i, j)
    pair, and merging stops once every candidate gain is negative.
    """
    if n < 1:
        raise ValueError("graph must have at least one node")
    state = ClusterState(n, edges)
    if n == 1 or state.m == 0:
        return Partition(list(range(n)), 0.0, degenerate=True)
    while True:
        best: tuple[float, Edge] | None = None
        for pair in sorted(state.between):
            gain = state.delta_q(*pair)
            if best is None or gain > best[0] + 1e-15:
                best = (gain, pair)
        if best is None or best[0] < 0.0:
            break
        state.merge(*best[1])
    return Partition(state.assignment(), state.q())


def gn_dendrogram(n: int, edges: list[Edge]) -> list[list[int]]:
    """Component assignments after each batch of max-betweenness removals.

    Every edge tied for the highest betweenness is removed in one batch;
    the sequence runs until no edges remain, so the last level is all
    singletons.
    """
    clean = sorted({(min(u, v), max(u, v)) for u, v in edges if u != v})
    if not clean:
        raise ValueError("divisive clustering needs at least one edge")
    levels: list[list[int]] = []
    current = list(clean)
    names = [str(i) for i in range(n)]
    while current:
        g = DirectedGraph(names, current)
        scores = edge_betweenness(g, treat_as_undirected=True)
        top = max(scores.values())
        current = [e for e in current if scores[e] < top - 1e-12]
        levels.append(_components(n, current))
    return levels


def girvan_newman_cluster(n: int, edges: list[Edge]) -> Partition:
    """Divisive clustering by repeated max-betweenness edge removal.

    Builds the full dendrogram, then picks the level with the smallest
    between-cluster to within-cluster edge density ratio, densities
    measured against the original edge set as edges per possible pair.
    Ties prefer fewer clusters.
    """
    original = sorted({(min(u, v), max(u, v)) for u, v in edges if u != v})
    levels = gn_dendrogram(n, edges)

    best: tuple[float, int, list[int]] | None = None
    for assignment in levels:
        k = max(assignment) + 1
        if k < 2:
            continue
        sizes = [0] * k
        for cid in assignment:
            sizes[cid] += 1
        within_pairs = sum(s * (s - 1) // 2 for s in sizes)
        between_pairs = (n * (n - 1) // 2) - within_pairs
        within = sum(1 for u, v in original if assignment[u] == assignment[v])
        between = len(original) - within
        if within_pairs == 0 or within == 0:
            ratio = float("inf")
        else:
            ratio = (between / between_pairs) / (within / within_pairs)
        if best is None or ratio < best[0] - 1e-12 or (abs(ratio - best[0]) <= 1e-12 and k < best[1]):
            best = (ratio, k, assignment)
    if best is None:  # single node or no splittable level
        return Partition(_relabel(_components(n, original)), 0.0, degenerate=True)
    assignment = _relabel(best[2])
    return Partition(assignment, modularity(n, original, assignment))


def _components(n: int, edges: list[Edge]) -> list[int]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    comp = [-1] * n
    cid = 0
    for start in range(n):
        if comp[start] != -1:
            continue
        comp[start] = cid
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if comp[v] == -1:
                    comp[v] = cid
                    stack.append(v)
        cid += 1
    return comp


@dataclass
class Module:
    """One node of the module tree; leaves carry content, interiors children."""

    module_id: int
    label: str
    member_ids: list[str]
    children: list["Module"] = field(default_factory=list)
    irreducible: bool = False
    clustering_q: float | None = None

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> list["Module"]:
        out = [self]
        for child in self.children:
            out.extend(child.walk())
        return out

    def leaves(self) -> list["Module"]:
        return [m for m in self.walk() if m.is_leaf]


@dataclass
class ModuleTree:
    root: Module
    algo: str

    def modules(self) -> list[Module]:
        return self.root.walk()

    def leaf_member_ids(self) -> list[str]:
        out: list[str] = []
        for leaf in self.root.leaves():
            out.extend(leaf.member_ids)
        return out


def recursive_modularize(
    lg: LayoutGraph,
    threshold: int = 75,
    algo: str = "cnm",
    hints: list[tuple[str, list[str]]] | None = None,
) -> ModuleTree:
    """Split the layout graph into nested modules.

    Any module holding ``threshold`` or more nodes is clustered and its
    communities become child modules (recursively); a module the
    clustering cannot split is marked irreducible and kept whole. Main
    chains are single layout nodes here, so they can never be divided
    across modules. Optional hints pre-assign the top level: each
    (label, node ids) group becomes a child module, leftovers pooled
    into an "Unassigned" sibling.
    """
    if threshold < 2:
        raise ValueError("threshold must be at least 2")
    if algo not in ("cnm", "gn"):
        raise ValueError(f"unknown clustering algorithm: {algo!r}")

    ids = lg.node_ids
    all_edges = lg.undirected_pairs()
    counter = [0]

    def new_module(members: list[str], label: str | None = None) -> Module:
        counter[0] += 1
        return Module(counter[0], label or f"Module {counter[0]}", members)

    def cluster_members(members: list[str]) -> tuple[list[list[str]], float] | None:
        local = {node_id: i for i, node_id in enumerate(members)}
        sub_edges = [
            (local[ids[u]], local[ids[v]])
            for u, v in all_edges
            if ids[u] in local and ids[v] in local
        ]
        if not sub_edges:
            return None
        if algo == "cnm":
            part = cnm_cluster(len(members), sub_edges)
        else:
            part = girvan_newman_cluster(len(members), sub_edges)
        if part.count < 2:
            return None
        groups = [[members[i] for i in group] for group in part.communities()]
        return groups, part.q

    def recurse(module: Module) -> None:
        if len(module.member_ids) < threshold:
            return
        clustered = cluster_members(module.member_ids)
        if clustered is None:
            module.irreducible = True
            return
        groups, module.clustering_q = clustered
        module.member_ids = []
        module.children = [new_module(g) for g in groups]
        for child in module.children:
            recurse(child)

    root = Module(0, "Model", list(ids))
    if hints:
        _apply_hints(root, hints, set(ids), new_module)
        for child in root.children:
            recurse(child)
    else:
        recurse(root)
    return ModuleTree(root, algo)


def _apply_hints(root: Module, hints: list[tuple[str, list[str]]],
                 valid: set[str], new_module) -> None:
    seen: set[str] = set()
    children: list[Module] = []
    for label, members in hints:
        for node_id in members:
            if node_id not in valid:
                raise ValueError(f"hint references unknown node: {node_id!r}")
            if node_id in seen:
                raise ValueError(f"hint assigns {node_id!r} to more than one module")
            seen.add(node_id)
        children.append(new_module(list(members), label=label))
    leftover = [node_id for node_id in root.member_ids if node_id not in seen]
    if leftover:
        children.append(new_module(leftover, label="Unassigned"))
    root.member_ids = []
    root.children = children


def write_edge_list(lg: LayoutGraph) -> str:
    """One ``src_id dst_id`` line per edge, outgoing connections only,
    ids assigned in node iteration order."""
    index = {node_id: i for i, node_id in enumerate(lg.node_ids)}
    out: dict[int, list[int]] = {}
    for a, b in lg.edges:
        out.setdefault(index[a], []).append(index[b])
    lines = []
    for src in sorted(out):
        for dst in sorted(out[src]):
            lines.append(f"{src} {dst}")
    return "\n".join(lines) + ("\n" if lines else "")


def read_communities(text: str, lg: LayoutGraph) -> Partition:
    """Parse externally produced clusters, one cluster per line.

    Every node id must appear in exactly one cluster.
    """
    n = len(lg.nodes)
    raw = [-1] * n
    cid = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        for token in body.split():
            try:
                node = int(token)
            except ValueError:
                raise ValueError(f"line {lineno}: invalid id {token!r}") from None
            if not 0 <= node < n:
                raise ValueError(f"line {lineno}: unknown id {node}")
            if raw[node] != -1:
                raise ValueError(f"line {lineno}: id {node} appears in more than one cluster")
            raw[node] = cid
        cid += 1
    missing = [i for i, c in enumerate(raw) if c == -1]
    if missing:
        raise ValueError(f"ids missing from cluster file: {missing}")
    assignment = _relabel(raw)
    edges = lg.undirected_pairs()
    if edges:
        return Partition(assignment, modularity(n, edges, assignment))
    return Partition(assignment, 0.0, degenerate=True)
