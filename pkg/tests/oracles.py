"""Independent brute-force oracles used to pin expected values.

Everything here is deliberately naive (exhaustive enumeration, cubic
relaxation, matrix-form modularity) and shares no code path with the
package implementations it checks.
"""

from __future__ import annotations

def floyd_warshall(n: int, edges: list[tuple[int, int]], undirected: bool) -> list[list[float]]:
    """Naive O(n^3) relaxation on hop counts."""
    inf = float("inf")
    d = [[inf] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0.0
    for u, v in edges:
        d[u][v] = 1.0
        if undirected:
            d[v][u] = 1.0
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def bfs_levels(n: int, adj: list[list[int]], source: int) -> list[float]:
    """Exhaustive frontier expansion (no deque, distinct from the package BFS)."""
    inf = float("inf")
    dist = [inf] * n
    dist[source] = 0.0
    frontier = [source]
    level = 0
    while frontier:
        level += 1
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if dist[v] == inf:
                    dist[v] = float(level)
                    nxt.append(v)
        frontier = nxt
    return dist


def adjacency(n: int, edges: list[tuple[int, int]], undirected: bool) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        if undirected:
            adj[v].append(u)
    return [sorted(set(a)) for a in adj]


def all_shortest_paths(adj: list[list[int]], dist: list[float], s: int, t: int) -> list[list[int]]:
    """Every shortest s->t path, by depth-first walk along the BFS levels."""
    if dist[t] == float("inf") or s == t:
        return []
    paths: list[list[int]] = []

    def walk(node: int, trail: list[int]) -> None:
        if node == t:
            paths.append(list(trail))
            return
        for nxt in adj[node]:
            if dist[nxt] == dist[node] + 1.0 and dist[nxt] <= dist[t]:
                trail.append(nxt)
                walk(nxt, trail)
                trail.pop()

    walk(s, [s])
    return paths


def betweenness_oracle(n: int, edges: list[tuple[int, int]],
                       undirected: bool) -> dict[tuple[int, int], float]:
    """Fractional edge betweenness by literal path enumeration."""
    adj = adjacency(n, edges, undirected)
    if undirected:
        scores = {(min(u, v), max(u, v)): 0.0 for u, v in edges}
        pairs = [(s, t) for s in range(n) for t in range(s + 1, n)]
    else:
        scores = {(u, v): 0.0 for u, v in edges}
        pairs = [(s, t) for s in range(n) for t in range(n) if s != t]
    for s, t in pairs:
        dist = bfs_levels(n, adj, s)
        paths = all_shortest_paths(adj, dist, s, t)
        if not paths:
            continue
        share = 1.0 / len(paths)
        for path in paths:
            for a, b in zip(path, path[1:]):
                key = (min(a, b), max(a, b)) if undirected else (a, b)
                scores[key] += share
    return scores


def simple_cycles_through(n: int, edges: list[tuple[int, int]],
                          edge: tuple[int, int]) -> list[list[int]]:
    """All simple directed cycles containing the given edge."""
    adj = adjacency(n, edges, undirected=False)
    u, v = edge
    if v not in adj[u]:
        raise ValueError("edge not in graph")
    cycles: list[list[int]] = []

    def walk(node: int, trail: list[int]) -> None:
        for nxt in adj[node]:
            if nxt == u:
                cycles.append([u] + trail)
            elif nxt not in trail and nxt != u:
                trail.append(nxt)
                walk(nxt, trail)
                trail.pop()

    walk(v, [v])
    return cycles


def set_partitions(n: int):
    """All set partitions of range(n) as restricted-growth assignment lists."""
    assignment = [0] * n

    def grow(i: int, maxid: int):
        if i == n:
            yield list(assignment)
            return
        for cid in range(maxid + 2):
            assignment[i] = cid
            yield from grow(i + 1, max(maxid, cid))

    yield from grow(1, 0)


def modularity_matrix_form(n: int, edges: list[tuple[int, int]],
                           assignment: list[int]) -> float:
    """Q via the adjacency-matrix definition, ordered pairs."""
    m = len(edges)
    a = [[0] * n for _ in range(n)]
    deg = [0] * n
    for u, v in edges:
        a[u][v] += 1
        a[v][u] += 1
        deg[u] += 1
        deg[v] += 1
    total = 0.0
    for i in range(n):
        for j in range(n):
            if assignment[i] == assignment[j]:
                total += a[i][j] - deg[i] * deg[j] / (2.0 * m)
    return total / (2.0 * m)


def best_partition(n: int, edges: list[tuple[int, int]]) -> tuple[float, list[int]]:
    best_q = float("-inf")
    best = None
    for assignment in set_partitions(n):
        q = modularity_matrix_form(n, edges, assignment)
        if q > best_q:
            best_q = q
            best = assignment
    return best_q, best


def random_connected_graph(rng, n: int, extra_edges: int) -> list[tuple[int, int]]:
    """Random spanning tree plus extra undirected edges, no duplicates."""
    edges: set[tuple[int, int]] = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        a = order[rng.randrange(i)]
        b = order[i]
        edges.add((min(a, b), max(a, b)))
    attempts = 0
    while len(edges) < n - 1 + extra_edges and attempts < 200:
        a, b = rng.randrange(n), rng.randrange(n)
        attempts += 1
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return sorted(edges)


def random_model_json(rng, max_vars: int = 14) -> str:
    """A random valid model: typed variables, dependencies, and flow
    attachments that respect the one-upstream/one-downstream rule."""
    import json

    n = rng.randrange(1, max_vars)
    names = [f"v{i}" for i in range(n)]
    kinds = [rng.choice(["stock", "flow", "auxiliary"]) for _ in range(n)]
    entries = []
    flows = [names[i] for i in range(n) if kinds[i] == "flow"]
    free_in = list(flows)
    free_out = list(flows)
    for i, name in enumerate(names):
        others = names[:i] + names[i + 1:]
        deps = rng.sample(others, k=min(rng.randrange(0, 4), len(others)))
        entry = {"name": name, "kind": kinds[i], "depends_on": deps}
        if kinds[i] == "stock":
            k_in = min(rng.randrange(0, 3), len(free_in))
            entry["inflows"] = [free_in.pop(rng.randrange(len(free_in)))
                                for _ in range(k_in)]
            k_out = min(rng.randrange(0, 3), len(free_out))
            picks = []
            for _ in range(k_out):
                f = free_out.pop(rng.randrange(len(free_out)))
                if f in entry["inflows"]:
                    continue  # a flow cannot both fill and drain one stock
                picks.append(f)
            entry["outflows"] = picks
        entries.append(entry)
    return json.dumps({"variables": entries})


def rect_pairs_overlapping(nodes) -> list[tuple[int, int]]:
    """Strict rectangle intersections, computed from raw bounds."""
    out = []
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            a, b = nodes[i], nodes[j]
            if (a.x - a.half_w < b.x + b.half_w and b.x - b.half_w < a.x + a.half_w
                    and a.y - a.half_h < b.y + b.half_h and b.y - b.half_h < a.y + a.half_h):
                out.append((i, j))
    return out
