"""Brute-force oracles, kept independent of the library's fast paths.

Everything here recomputes adjacency, connectivity and distances from raw
edge sets on every call, and enumerates moves by trying every (node,
dropped, added) triple. Slow on purpose.
"""

from collections import deque
from fractions import Fraction
from itertools import combinations


def norm(u, v):
    return (u, v) if u <= v else (v, u)


def bfs(n, edges, source):
    nbrs = {v: [] for v in range(n)}
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def connected(n, edges):
    return len(bfs(n, edges, 0)) == n


def node_cost(n, edges, interests, version, v):
    dist = bfs(n, edges, v)
    ds = [dist[u] for u in interests[v]]
    if version == "MAX":
        return max(ds)
    return Fraction(sum(ds), len(ds))


def interests_map(n, interest_edges):
    out = {v: [] for v in range(n)}
    for a, b in interest_edges:
        out[a].append(b)
        out[b].append(a)
    return out


def improving_swaps(inst, v):
    """Every improving (dropped, added, new_cost) for v, from scratch."""
    n = inst.n
    edges = set(inst.connection_edges)
    interests = interests_map(n, inst.interest_edges)
    version = inst.version.value
    current = node_cost(n, edges, interests, version, v)
    neighbors = sorted(u for e in edges if v in e for u in e if u != v)
    results = []
    for x in neighbors:
        for w in range(n):
            if w in (v, x) or norm(v, w) in edges:
                continue
            trial = (edges - {norm(v, x)}) | {norm(v, w)}
            if not connected(n, trial):
                continue
            cost = node_cost(n, trial, interests, version, v)
            if cost < current:
                results.append((x, w, cost))
    return results


def is_equilibrium_naive(inst):
    """True iff no single swap improves any node; all from scratch."""
    for v in range(inst.n):
        if improving_swaps(inst, v):
            return False
    return True


def trees_recursive(n):
    """All labeled trees on 0..n-1 by recursive edge selection.

    Extends a forest one candidate edge at a time, skipping edges that
    close a cycle (union-find) and pruning branches that cannot reach
    n - 1 edges.
    """
    pairs = list(combinations(range(n), 2))
    if n == 1:
        yield frozenset()
        return

    def rec(index, chosen, parent):
        if len(chosen) == n - 1:
            yield frozenset(chosen)
            return
        if index >= len(pairs) or len(chosen) + (len(pairs) - index) < n - 1:
            return

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        a, b = pairs[index]
        ra, rb = find(a), find(b)
        if ra != rb:
            next_parent = dict(parent)
            next_parent[ra] = rb
            yield from rec(index + 1, chosen + [pairs[index]], next_parent)
        yield from rec(index + 1, chosen, parent)

    yield from rec(0, [], {v: v for v in range(n)})


def optimum_recursive(n, interest_edges, version):
    """Minimum social cost over all trees, via the recursive enumeration."""
    interests = interests_map(n, interest_edges)
    best = None
    for tree in trees_recursive(n):
        total = sum(node_cost(n, tree, interests, version, v) for v in range(n))
        if best is None or total < best:
            best = total
    return best
