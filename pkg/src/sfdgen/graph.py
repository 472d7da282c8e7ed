"""Directed-graph services: shortest paths, feedback loops, betweenness.

Distances are unweighted hop counts throughout; unreachable pairs carry
an infinite sentinel. All queries are read-only over an immutable graph
and safe to run concurrently.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

INF = float("inf")


class DirectedGraph:
    """Immutable directed graph over indexed, named nodes.

    Out-edge lists are kept sorted by target index so traversals are
    deterministic regardless of construction order.
    """

    def __init__(self, names: list[str], edges: list[tuple[int, int]] | None = None):
        if len(set(names)) != len(names):
            raise ValueError("node names must be unique")
        self.names = list(names)
        self.index = {name: i for i, name in enumerate(self.names)}
        self.n = len(self.names)
        out: list[set[int]] = [set() for _ in range(self.n)]
        inc: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in edges or []:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            out[u].add(v)
            inc[v].add(u)
        self.out_edges = [sorted(s) for s in out]
        self.in_edges = [sorted(s) for s in inc]

    @classmethod
    def from_named_edges(cls, names: list[str], edges: list[tuple[str, str]]) -> "DirectedGraph":
        index = {name: i for i, name in enumerate(names)}
        return cls(names, [(index[a], index[b]) for a, b in edges])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.out_edges[u]]

    def has_edge(self, u: int, v: int) -> bool:
        return v in set(self.out_edges[u])

    def undirected_neighbors(self) -> list[list[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u in range(self.n):
            for v in self.out_edges[u]:
                adj[u].add(v)
                adj[v].add(u)
        return [sorted(s) for s in adj]


@dataclass(frozen=True)
class FeedbackLoop:
    """A simple directed cycle, stored as its ordered node list."""

    nodes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.nodes)


def _bfs_hops(neighbors: list[list[int]], source: int, n: int) -> list[float]:
    dist = [INF] * n
    dist[source] = 0.0
    q = deque([source])
    while q:
        u = q.popleft()
        for v in neighbors[u]:
            if dist[v] == INF:
                dist[v] = dist[u] + 1.0
                q.append(v)
    return dist


def all_pairs_shortest_paths(g: DirectedGraph, treat_as_undirected: bool = False) -> np.ndarray:
    """n x n hop-count matrix; unreachable pairs are +inf."""
    neighbors = g.undirected_neighbors() if treat_as_undirected else g.out_edges
    d = np.full((g.n, g.n), INF)
    for s in range(g.n):
        d[s, :] = _bfs_hops(neighbors, s, g.n)
    return d


def shortest_feedback_loop_through(
    g: DirectedGraph, edge: tuple[int, int], min_len: int = 3
) -> FeedbackLoop | None:
    """Minimal directed cycle containing ``edge`` with at least ``min_len`` nodes.

    The cycle is edge + the shortest directed path back from the edge's
    head to its tail. When that trivial return edge alone would undercut
    ``min_len`` it is excluded from the search, which by construction
    yields the next-shortest simple cycle. Ties are broken toward the
    lexicographically smallest node-index sequence after the edge head.
    """
    u, v = edge
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge of the graph")

    skip_direct = min_len > 2 and g.has_edge(v, u)

    # Distance-to-u over the reverse graph gives, from any node, the
    # remaining hops of a shortest path to u.
    dist_to_u = [INF] * g.n
    dist_to_u[u] = 0.0
    q = deque([u])
    while q:
        w = q.popleft()
        for p in g.in_edges[w]:
            if p == v and w == u and skip_direct:
                continue
            if dist_to_u[p] == INF:
                dist_to_u[p] = dist_to_u[w] + 1.0
                q.append(p)
    if dist_to_u[v] == INF:
        return None
    if 1 + dist_to_u[v] < min_len:  # node count: u plus the v->...->u path
        return None

    # Greedy reconstruction: always step to the smallest-index neighbor
    # that stays on a shortest path.
    path = [v]
    cur = v
    while cur != u:
        for w in g.out_edges[cur]:
            if cur == v and w == u and skip_direct:
                continue
            if dist_to_u[w] == dist_to_u[cur] - 1.0:
                path.append(w)
                cur = w
                break
    return FeedbackLoop(tuple([u] + path[:-1]))


def edge_betweenness(
    g: DirectedGraph, treat_as_undirected: bool = False
) -> dict[tuple[int, int], float]:
    """Brandes-style edge betweenness with fractional path splitting.

    Each node pair contributes one unit, divided equally among its
    equal-length shortest paths. Undirected mode counts unordered pairs
    and keys edges as (min, max).
    """
    if treat_as_undirected:
        neighbors = g.undirected_neighbors()
        scores = {(min(u, v), max(u, v)): 0.0 for u, v in g.edges()}
    else:
        neighbors = g.out_edges
        scores = {e: 0.0 for e in g.edges()}

    for s in range(g.n):
        # Single-source shortest paths with path counts.
        dist = [INF] * g.n
        sigma = [0.0] * g.n
        preds: list[list[int]] = [[] for _ in range(g.n)]
        dist[s] = 0.0
        sigma[s] = 1.0
        order: list[int] = []
        q = deque([s])
        while q:
            u = q.popleft()
            order.append(u)
            for v in neighbors[u]:
                if dist[v] == INF:
                    dist[v] = dist[u] + 1.0
                    q.append(v)
                if dist[v] == dist[u] + 1.0:
                    sigma[v] += sigma[u]
                    preds[v].append(u)
        # Accumulate dependencies back-to-front.
        delta = [0.0] * g.n
        for w in reversed(order):
            for u in preds[w]:
                share = sigma[u] / sigma[w] * (1.0 + delta[w])
                key = (min(u, w), max(u, w)) if treat_as_undirected else (u, w)
                scores[key] += share
                delta[u] += share

    if treat_as_undirected:
        # Every unordered pair was counted once per endpoint.
        scores = {e: x / 2.0 for e, x in scores.items()}
    return scores
