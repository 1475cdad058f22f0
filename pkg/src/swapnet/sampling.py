"""Seeded random trees and interest graphs for tests and experiments.

Everything here is driven by an explicit `random.Random` so that every
sampled instance is reproducible from its seed.
"""

from __future__ import annotations

import random

from .errors import ParameterOutOfDomain
from .model import CostVersion, Edge, GameInstance, norm_edge


def random_tree_edges(n: int, rng: random.Random) -> set[Edge]:
    """A uniform labeled tree on 0..n-1, decoded from a random Prufer code."""
    if n < 2:
        raise ParameterOutOfDomain("a tree needs at least 2 nodes")
    if n == 2:
        return {(0, 1)}
    code = [rng.randrange(n) for _ in range(n - 2)]
    return set(tree_from_prufer(code))


def tree_from_prufer(code: list[int]) -> list[Edge]:
    """Decode a Prufer sequence into the edges of the labeled tree."""
    n = len(code) + 2
    degree = [1] * n
    for x in code:
        degree[x] += 1
    edges: list[Edge] = []
    for x in code:
        leaf = next(v for v in range(n) if degree[v] == 1)
        edges.append(norm_edge(leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, w = (v for v in range(n) if degree[v] == 1)
    edges.append(norm_edge(u, w))
    return edges


def random_interest_edges(
    n: int, rng: random.Random, edge_prob: float | None = None
) -> set[Edge]:
    """A random interest graph where every node has at least one interest."""
    if n < 2:
        raise ParameterOutOfDomain("interests need at least 2 nodes")
    p = edge_prob if edge_prob is not None else min(1.0, 2.0 / n)
    edges: set[Edge] = set()
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    covered = {x for e in edges for x in e}
    for v in range(n):
        if v not in covered:
            partner = rng.choice([u for u in range(n) if u != v])
            edges.add(norm_edge(v, partner))
            covered.add(v)
            covered.add(partner)
    return edges


def random_tree_instance(
    n: int,
    rng: random.Random,
    version: CostVersion = CostVersion.MAX,
    edge_prob: float | None = None,
) -> GameInstance:
    """A random tree connection graph paired with random interests."""
    return GameInstance.from_edges(
        n,
        random_tree_edges(n, rng),
        random_interest_edges(n, rng, edge_prob),
        version,
    )
