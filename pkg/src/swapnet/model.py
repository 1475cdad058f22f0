"""Core game state: connection and interest graphs, distances, costs, swaps.

Nodes are dense integer ids 0..n-1. Both graphs are undirected simple graphs
kept as normalized (min, max) pairs. AVG costs are exact `Fraction`s so that
improving-step comparisons and ties never depend on float rounding.

All operations here are pure functions over immutable instances; applying a
step returns a fresh instance and never mutates shared state.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .errors import (
    DisconnectedGraph,
    DisconnectingSwap,
    InvalidSwap,
    PreconditionViolated,
)

Edge = tuple[int, int]
Cost = int | Fraction


def norm_edge(u: int, v: int) -> Edge:
    """Normalize an unordered pair to (min, max) form."""
    return (u, v) if u <= v else (v, u)


def normalize_edges(pairs: Iterable[tuple[int, int]]) -> frozenset[Edge]:
    return frozenset(norm_edge(u, v) for u, v in pairs)


class CostVersion(Enum):
    """Which aggregate over interest distances a node minimizes."""

    MAX = "MAX"
    AVG = "AVG"


@dataclass(frozen=True)
class Swap:
    """A single edge replacement actor:[dropped -> added]."""

    actor: int
    dropped: int
    added: int

    @property
    def dropped_edge(self) -> Edge:
        return norm_edge(self.actor, self.dropped)

    @property
    def added_edge(self) -> Edge:
        return norm_edge(self.actor, self.added)

    def __str__(self) -> str:
        return f"{self.actor}:[{self.dropped}->{self.added}]"


@dataclass(frozen=True)
class ImprovingStep:
    """One node's simultaneous swaps, applied as a unit.

    Producers (best-response search) guarantee the step strictly decreases
    the actor's private cost; `apply_step` only enforces the structural
    invariants and connectivity.
    """

    actor: int
    swaps: tuple[Swap, ...]

    def __post_init__(self) -> None:
        if not self.swaps:
            raise InvalidSwap("an improving step needs at least one swap")
        if any(s.actor != self.actor for s in self.swaps):
            raise InvalidSwap("all swaps in a step must share the actor")

    def __str__(self) -> str:
        inner = ", ".join(f"{s.dropped}->{s.added}" for s in self.swaps)
        return f"{self.actor}:[{inner}]"


@dataclass(frozen=True)
class GameInstance:
    """Immutable game state: node count, both edge sets, cost version."""

    n: int
    connection_edges: frozenset[Edge]
    interest_edges: frozenset[Edge]
    version: CostVersion = CostVersion.MAX

    @classmethod
    def from_edges(
        cls,
        n: int,
        connection: Iterable[tuple[int, int]],
        interests: Iterable[tuple[int, int]],
        version: CostVersion = CostVersion.MAX,
    ) -> "GameInstance":
        """Build an instance from any iterables of (u, v) pairs."""
        return cls(n, normalize_edges(connection), normalize_edges(interests), version)

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        """Connection-graph neighbors, sorted, for every node."""
        nbrs: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for u, v in self.connection_edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in nbrs.items()}

    @cached_property
    def interests(self) -> dict[int, tuple[int, ...]]:
        """Interest-graph neighbors I(v), sorted, for every node."""
        nbrs: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for u, v in self.interest_edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in nbrs.items()}

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def interests_of(self, v: int) -> tuple[int, ...]:
        return self.interests[v]

    def is_tree(self) -> bool:
        """Edge-count tree test; exact for connected instances."""
        return len(self.connection_edges) == self.n - 1 and is_connected(
            self.adjacency, self.n
        )

    def with_connection(self, edges: Iterable[tuple[int, int]]) -> "GameInstance":
        return replace(self, connection_edges=normalize_edges(edges))


@dataclass(frozen=True)
class ValidationReport:
    """Every violated instance invariant, as human-readable strings."""

    violations: tuple[str, ...]

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.is_valid


def bfs_distances(adjacency: Mapping[int, Iterable[int]], source: int) -> dict[int, int]:
    """Hop distances from source to every reachable node."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        for w in adjacency[u]:
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return dist


def is_connected(adjacency: Mapping[int, Iterable[int]], n: int) -> bool:
    if n <= 1:
        return True
    return len(bfs_distances(adjacency, 0)) == n


def edges_connected(edges: Iterable[Edge], n: int) -> bool:
    """Connectivity of an explicit edge set on nodes 0..n-1."""
    nbrs: dict[int, list[int]] = {v: [] for v in range(n)}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    return is_connected(nbrs, n)


def validate_instance(inst: GameInstance, require_tree: bool = False) -> ValidationReport:
    """Check every instance invariant; an empty report means valid.

    Violations are data, not failures: callers decide whether to proceed.
    """
    bad: list[str] = []
    if inst.n < 1:
        bad.append(f"node count must be positive, got {inst.n}")
        return ValidationReport(tuple(bad))

    for name, edges in (("connection", inst.connection_edges), ("interest", inst.interest_edges)):
        for u, v in edges:
            if u == v:
                bad.append(f"{name} graph has a self-loop at node {u}")
            if not (0 <= u < inst.n and 0 <= v < inst.n):
                bad.append(f"{name} edge ({u}, {v}) has an endpoint outside 0..{inst.n - 1}")

    if bad:
        # Range errors would corrupt the adjacency-based checks below.
        return ValidationReport(tuple(bad))

    if not is_connected(inst.adjacency, inst.n):
        bad.append("connection graph is not connected")

    if require_tree:
        expected = inst.n - 1
        found = len(inst.connection_edges)
        if found != expected:
            bad.append(
                f"connection graph is not a tree: expected {expected} edges, found {found}"
            )
        if _has_cycle(inst.adjacency, inst.n):
            bad.append("connection graph is not a tree: it contains a cycle")

    for v in range(inst.n):
        if not inst.interests_of(v):
            bad.append(f"node {v} has no interest")

    return ValidationReport(tuple(bad))


def _has_cycle(adjacency: Mapping[int, tuple[int, ...]], n: int) -> bool:
    seen: set[int] = set()
    for root in range(n):
        if root in seen:
            continue
        seen.add(root)
        stack = [(root, -1)]
        while stack:
            u, parent = stack.pop()
            skipped_parent = False
            for w in adjacency[u]:
                if w == parent and not skipped_parent:
                    skipped_parent = True  # one parent edge back is fine
                    continue
                if w in seen:
                    return True
                seen.add(w)
                stack.append((w, u))
    return False


def distances_from(inst: GameInstance, source: int) -> dict[int, int]:
    """Exact unweighted shortest-path distances from source to all nodes."""
    dist = bfs_distances(inst.adjacency, source)
    if len(dist) != inst.n:
        missing = sorted(set(range(inst.n)) - dist.keys())
        raise DisconnectedGraph(f"nodes unreachable from {source}: {missing}")
    return dist


def cost_from_distances(
    dist: Mapping[int, int], interests: tuple[int, ...], version: CostVersion
) -> Cost:
    """Aggregate interest distances per the cost version (exact arithmetic)."""
    if not interests:
        raise PreconditionViolated("node has no interest; instance is invalid")
    if version is CostVersion.MAX:
        return max(dist[u] for u in interests)
    return Fraction(sum(dist[u] for u in interests), len(interests))


def private_cost(inst: GameInstance, v: int) -> Cost:
    """c(v): max (MAX) or exact average (AVG) distance to v's interests."""
    return cost_from_distances(distances_from(inst, v), inst.interests_of(v), inst.version)


def social_cost(inst: GameInstance) -> Cost:
    """Sum of private costs over all nodes."""
    return sum(private_cost(inst, v) for v in range(inst.n))


def all_private_costs(inst: GameInstance) -> dict[int, Cost]:
    return {v: private_cost(inst, v) for v in range(inst.n)}


def apply_step(inst: GameInstance, step: "ImprovingStep | Swap") -> GameInstance:
    """Apply a swap or simultaneous step, returning a new instance.

    Raises InvalidSwap on structural violations and DisconnectingSwap if the
    resulting graph would be disconnected. Edge and node counts are
    preserved, so on a tree the result is again a tree.
    """
    swaps = (step,) if isinstance(step, Swap) else tuple(step.swaps)

    dropped: set[Edge] = set()
    added: set[Edge] = set()
    for s in swaps:
        if not (0 <= s.actor < inst.n and 0 <= s.dropped < inst.n and 0 <= s.added < inst.n):
            raise InvalidSwap(f"swap {s} references a node outside 0..{inst.n - 1}")
        if s.added == s.actor:
            raise InvalidSwap(f"swap {s} would add a self-loop")
        if s.added == s.dropped:
            raise InvalidSwap(f"swap {s} is an identity swap")
        e_drop = s.dropped_edge
        if e_drop not in inst.connection_edges:
            raise InvalidSwap(f"swap {s} drops a non-edge {e_drop}")
        if e_drop in dropped:
            raise InvalidSwap(f"step drops edge {e_drop} twice")
        dropped.add(e_drop)
        added.add(s.added_edge)

    new_edges = (set(inst.connection_edges) - dropped) | added
    # Connectivity is checked before the duplicate-add rule so that a swap
    # that both duplicates an edge and strands a node reports the
    # connectivity failure, which is the binding constraint for players.
    if not edges_connected(new_edges, inst.n):
        raise DisconnectingSwap(f"step {'; '.join(map(str, swaps))} disconnects the graph")
    for s in swaps:
        if s.added_edge in inst.connection_edges:
            raise InvalidSwap(f"swap {s} adds an edge that already exists")
    if len(added) != len(swaps):
        raise InvalidSwap("step adds the same edge twice")

    return inst.with_connection(new_edges)
