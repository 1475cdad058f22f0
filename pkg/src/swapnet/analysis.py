"""Structural certificates and bounds for verified equilibria.

The arrangement walker, the independence-number bound checks, and the
brute-force optima assume the instance has already been verified to be in
equilibrium (generator output or a converged dynamics run); the walker
treats a stall as evidence the input was not an equilibrium after all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator

from .errors import (
    BudgetExhausted,
    NotInEquilibrium,
    ParameterOutOfDomain,
    PreconditionViolated,
)
from .model import (
    Cost,
    CostVersion,
    Edge,
    GameInstance,
    all_private_costs,
    bfs_distances,
    norm_edge,
    normalize_edges,
    private_cost,
    social_cost,
)
from .dynamics import SINGLE, is_equilibrium
from .sampling import tree_from_prufer


@dataclass(frozen=True)
class MaxArrangement:
    """An interest-linked node walk from a high-cost node down to cost 3.

    nodes[0] is the start, nodes[i] is an interest of nodes[i-1], and
    per_step records (d(nodes[i], nodes[i+1]), cost of nodes[i+1]).
    """

    nodes: tuple[int, ...]
    start_cost: int
    per_step: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class TraversalStats:
    """Edge usage of the walk that visits an arrangement in order."""

    total_length: int
    distinct_edges: int
    max_edge_multiplicity: int


@dataclass(frozen=True)
class BoundCheck:
    name: str
    holds: bool
    lhs: int
    rhs: int


@dataclass(frozen=True)
class BoundsReport:
    """Structural bound checks for a verified MAX-equilibrium tree."""

    n: int
    max_private_cost: int
    mis_size: int
    checks: tuple[BoundCheck, ...]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)


def _tree_path(inst: GameInstance, a: int, b: int) -> list[int]:
    """The unique a-b path in a tree, including both endpoints."""
    parent = {a: a}
    queue = [a]
    while queue:
        nxt: list[int] = []
        for u in queue:
            for w in inst.adjacency[u]:
                if w not in parent:
                    parent[w] = u
                    nxt.append(w)
        if b in parent:
            break
        queue = nxt
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def _require_tree(inst: GameInstance, what: str) -> None:
    if len(inst.connection_edges) != inst.n - 1:
        raise PreconditionViolated(f"{what} is defined for tree instances only")


def find_t_configuration(inst: GameInstance, v: int) -> tuple[int, int] | None:
    """A pair x, y of v's interests with near-equal extreme distances and v
    within one edge of the x-y tree path; None if no such pair exists.

    A node in equilibrium with two or more interests always has one, so a
    missing pair flags an improvable node.
    """
    _require_tree(inst, "a T-configuration")
    interests = inst.interests_of(v)
    if len(interests) < 2:
        raise PreconditionViolated(f"node {v} has {len(interests)} interest(s); need >= 2")
    dist_v = bfs_distances(inst.adjacency, v)
    c = max(dist_v[u] for u in interests)
    extremes = [u for u in interests if dist_v[u] == c]
    near = [u for u in interests if dist_v[u] >= c - 1]
    for x in extremes:
        for y in near:
            if y == x:
                continue
            path = _tree_path(inst, x, y)
            if min(dist_v[p] for p in path) <= 1:
                return x, y
    return None


def build_max_arrangement(inst: GameInstance, start: int | None = None) -> MaxArrangement:
    """Walk interests outward from a high-cost node until cost 3 is reached.

    Successors maximize the distance to the node two places back, subject
    to the previous node sitting within one edge of the connecting tree
    path; ties break to the smallest id. In a genuine single-swap
    equilibrium the walk cannot stall before reaching a cost-3 node, so a
    stall raises NotInEquilibrium.
    """
    _require_tree(inst, "a MAX-arrangement")
    if inst.version is not CostVersion.MAX:
        raise PreconditionViolated("MAX-arrangements only apply to the MAX cost version")
    costs = all_private_costs(inst)
    if start is None:
        top = max(costs.values())
        if top <= 3:
            raise PreconditionViolated(f"no node has cost above 3 (max is {top})")
        start = min(v for v, c in costs.items() if c == top)
    elif costs[start] <= 3:
        raise PreconditionViolated(f"start node {start} has cost {costs[start]}, need > 3")

    dist_start = bfs_distances(inst.adjacency, start)
    first = min(u for u in inst.interests_of(start) if dist_start[u] == costs[start])
    nodes = [start, first]
    per_step = [(costs[start], int(costs[first]))]

    while costs[nodes[-1]] > 3:
        if len(nodes) > inst.n:
            raise NotInEquilibrium("arrangement exceeded n nodes; input is not an equilibrium")
        anchor, prev = nodes[-2], nodes[-1]
        dist_anchor = bfs_distances(inst.adjacency, anchor)
        dist_prev = bfs_distances(inst.adjacency, prev)
        best: tuple[int, int] | None = None  # (-distance, id), minimized
        for u in inst.interests_of(prev):
            path = _tree_path(inst, anchor, u)
            if min(dist_prev[p] for p in path) > 1:
                continue
            key = (-dist_anchor[u], u)
            if best is None or key < best:
                best = key
        if best is None:
            raise NotInEquilibrium(
                f"no valid successor after node {prev}; input is not an equilibrium"
            )
        chosen = best[1]
        if chosen in nodes:
            raise NotInEquilibrium(
                f"node {chosen} repeated in the arrangement; input is not an equilibrium"
            )
        if costs[chosen] < 3:
            raise NotInEquilibrium(
                f"cost dropped below 3 at node {chosen}; input is not an equilibrium"
            )
        nodes.append(chosen)
        per_step.append((dist_prev[chosen], int(costs[chosen])))

    return MaxArrangement(tuple(nodes), int(costs[nodes[0]]), tuple(per_step))


def arrangement_stats(inst: GameInstance, arr: MaxArrangement) -> TraversalStats:
    """Walk the consecutive tree paths of an arrangement, counting edges."""
    usage: dict[Edge, int] = {}
    total = 0
    for a, b in zip(arr.nodes, arr.nodes[1:]):
        path = _tree_path(inst, a, b)
        total += len(path) - 1
        for u, w in zip(path, path[1:]):
            e = norm_edge(u, w)
            usage[e] = usage.get(e, 0) + 1
    return TraversalStats(
        total_length=total,
        distinct_edges=len(usage),
        max_edge_multiplicity=max(usage.values(), default=0),
    )


def max_independent_set(
    n: int, edges: Iterable[tuple[int, int]], node_budget: int = 2_000_000
) -> set[int]:
    """An exact maximum independent set via branch and bound.

    Deterministic (ties break to smaller ids) and exact; raises
    BudgetExhausted when the search tree outgrows node_budget. Intended
    for interest graphs up to roughly 60 nodes.
    """
    adj = [0] * n
    for u, v in normalize_edges(edges):
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    # Greedy min-degree start gives the initial lower bound.
    best_set = 0
    free = (1 << n) - 1
    while free:
        v = min(
            (u for u in range(n) if free >> u & 1),
            key=lambda u: ((adj[u] & free).bit_count(), u),
        )
        best_set |= 1 << v
        free &= ~(adj[v] | 1 << v)
    best_size = best_set.bit_count()

    budget = node_budget

    def search(candidates: int, chosen: int, size: int) -> None:
        nonlocal best_set, best_size, budget
        budget -= 1
        if budget < 0:
            raise BudgetExhausted(f"independent-set search exceeded {node_budget} nodes")
        if size + candidates.bit_count() <= best_size:
            return
        if candidates == 0:
            best_set, best_size = chosen, size
            return
        # Branch on the highest-degree remaining vertex: including it prunes
        # most, excluding it shrinks the densest part first.
        v = min(
            (u for u in range(n) if candidates >> u & 1),
            key=lambda u: (-(adj[u] & candidates).bit_count(), u),
        )
        search(candidates & ~(adj[v] | 1 << v), chosen | 1 << v, size + 1)
        search(candidates & ~(1 << v), chosen, size)

    search((1 << n) - 1, 0, 0)
    return {v for v in range(n) if best_set >> v & 1}


def check_bounds(inst: GameInstance) -> BoundsReport:
    """Evaluate the structural cost bounds on a verified equilibrium tree."""
    _require_tree(inst, "the bounds report")
    costs = all_private_costs(inst)
    d_max = int(max(costs.values()))
    mis = max_independent_set(inst.n, inst.interest_edges)
    m = len(mis)

    if d_max <= 3:
        checks = (BoundCheck("max-cost-at-most-3", True, d_max, 3),)
        return BoundsReport(inst.n, d_max, m, checks)

    arr = build_max_arrangement(inst)
    even_prefix = [arr.nodes[i] for i in range(0, len(arr.nodes), 2) if i < len(arr.nodes) - 1]
    inside = sum(
        1 for i, u in enumerate(even_prefix) for w in even_prefix[i + 1 :]
        if norm_edge(u, w) in inst.interest_edges
    )
    checks = (
        BoundCheck(
            "square-cost-vs-edges",
            d_max * d_max + d_max - 6 <= 4 * (inst.n - 1),
            d_max * d_max + d_max - 6,
            4 * (inst.n - 1),
        ),
        BoundCheck("arrangement-vs-2mis", len(arr.nodes) <= 2 * m, len(arr.nodes), 2 * m),
        BoundCheck("even-prefix-independent", inside == 0, inside, 0),
    )
    return BoundsReport(inst.n, d_max, m, checks)


def enumerate_labeled_trees(n: int) -> Iterator[frozenset[Edge]]:
    """All n^(n-2) labeled trees on 0..n-1 via Prufer sequences."""
    if n < 2:
        raise ParameterOutOfDomain("tree enumeration needs n >= 2")
    if n == 2:
        yield frozenset({(0, 1)})
        return
    for code in product(range(n), repeat=n - 2):
        yield frozenset(tree_from_prufer(list(code)))


_ENUMERATION_CAP = 8


def brute_force_optimum(
    n: int, interests: Iterable[tuple[int, int]], version: CostVersion
) -> tuple[frozenset[Edge], Cost]:
    """The tree minimizing social cost for the given interests, with its cost.

    Exhaustive over all labeled trees; capped at n = 8. The optimum need
    not itself be an equilibrium.
    """
    if n > _ENUMERATION_CAP:
        raise ParameterOutOfDomain(f"tree enumeration is capped at n = {_ENUMERATION_CAP}")
    interest_edges = normalize_edges(interests)
    best: tuple[frozenset[Edge], Cost] | None = None
    for tree in enumerate_labeled_trees(n):
        inst = GameInstance(n, tree, interest_edges, version)
        cost = social_cost(inst)
        if best is None or cost < best[1]:
            best = (tree, cost)
    assert best is not None
    return best


@dataclass(frozen=True)
class PoAPoSReport:
    """Empirical price of anarchy / stability over all trees on n nodes."""

    optimum_cost: Cost
    optimum_edges: frozenset[Edge]
    equilibrium_count: int
    poa: Fraction | None
    pos: Fraction | None
    worst_eq: tuple[frozenset[Edge], Cost] | None
    best_eq: tuple[frozenset[Edge], Cost] | None


def empirical_poa_pos(
    n: int, interests: Iterable[tuple[int, int]], version: CostVersion
) -> PoAPoSReport:
    """Exact PoA/PoS by enumerating every tree and filtering equilibria.

    Reports poa = pos = None explicitly when no tree is a single-swap
    equilibrium for the given interests.
    """
    if n > _ENUMERATION_CAP:
        raise ParameterOutOfDomain(f"tree enumeration is capped at n = {_ENUMERATION_CAP}")
    interest_edges = normalize_edges(interests)
    optimum: tuple[frozenset[Edge], Cost] | None = None
    worst_eq: tuple[frozenset[Edge], Cost] | None = None
    best_eq: tuple[frozenset[Edge], Cost] | None = None
    eq_count = 0
    for tree in enumerate_labeled_trees(n):
        inst = GameInstance(n, tree, interest_edges, version)
        cost = social_cost(inst)
        if optimum is None or cost < optimum[1]:
            optimum = (tree, cost)
        if is_equilibrium(inst, SINGLE).is_equilibrium:
            eq_count += 1
            if worst_eq is None or cost > worst_eq[1]:
                worst_eq = (tree, cost)
            if best_eq is None or cost < best_eq[1]:
                best_eq = (tree, cost)
    assert optimum is not None
    poa = Fraction(worst_eq[1]) / Fraction(optimum[1]) if worst_eq else None
    pos = Fraction(best_eq[1]) / Fraction(optimum[1]) if best_eq else None
    return PoAPoSReport(optimum[1], optimum[0], eq_count, poa, pos, worst_eq, best_eq)
