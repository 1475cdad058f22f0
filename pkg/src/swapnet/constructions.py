"""Deterministic instance generators, each self-checked against its own
cost certificate and a full equilibrium verification before it is returned.

The lower-bound families lay leaves out along an internal spine at
triangular offsets so that consecutive interest partners sit at distances
that grow by one per step; that profile is what pins every leaf into a
position where no swap helps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CertificateMismatch, ParameterOutOfDomain, ReconstructionFailed
from .model import (
    Cost,
    CostVersion,
    Edge,
    GameInstance,
    Swap,
    all_private_costs,
    apply_step,
    norm_edge,
    normalize_edges,
)
from .dynamics import SINGLE, Scheduler, best_response, canonical_state, is_equilibrium


@dataclass(frozen=True)
class GeneratedInstance:
    """A generator's output together with its expected per-node costs."""

    instance: GameInstance
    certificate: dict[int, Cost]
    name: str
    params: dict[str, int]


def _verified(inst: GameInstance, certificate: dict[int, Cost], name: str,
              params: dict[str, int]) -> GeneratedInstance:
    """Re-derive every certified cost and verify the equilibrium claim."""
    actual = all_private_costs(inst)
    for v, expected in certificate.items():
        if actual[v] != expected:
            raise CertificateMismatch(
                f"{name}{params}: node {v} has cost {actual[v]}, certified {expected}"
            )
    report = is_equilibrium(inst, SINGLE)
    if not report.is_equilibrium:
        raise CertificateMismatch(
            f"{name}{params}: not an equilibrium, witness {report.witness}"
        )
    return GeneratedInstance(inst, certificate, name, params)


def build_equilibrium_alg1(n: int, interests) -> GameInstance:
    """A MAX-equilibrium tree with every private cost at most 2.

    Nodes with a single interest attach to it; a saturation loop connects
    each node that has at most one missing interest; the remaining nodes
    are starred around a center; leftover components are stitched to the
    center. Every 'arbitrary' choice takes the lowest node id, so the
    output is deterministic. Social cost is at most 2n.
    """
    interest_edges = normalize_edges(interests)
    iv: dict[int, list[int]] = {v: [] for v in range(n)}
    for u, w in interest_edges:
        iv[u].append(w)
        iv[w].append(u)
    for v in range(n):
        if not iv[v]:
            raise ParameterOutOfDomain(f"node {v} has no interest")
        iv[v].sort()

    edges: set[Edge] = set()
    pending = {v for v in range(n) if len(iv[v]) > 1}
    for v in range(n):
        if len(iv[v]) == 1:
            edges.add(norm_edge(v, iv[v][0]))

    while True:
        picked = None
        for v in sorted(pending):
            missing = [w for w in iv[v] if norm_edge(v, w) not in edges]
            if len(missing) <= 1:
                picked = (v, missing)
                break
        if picked is None:
            break
        v, missing = picked
        if missing:
            edges.add(norm_edge(v, missing[0]))
        pending.remove(v)

    if pending:
        center = min(pending)
        for w in sorted(pending - {center}):
            edges.add(norm_edge(center, w))
    else:
        center = 0

    # Stitch whatever is still separate (pure pendant clusters) to the center.
    comp = _components(n, edges)
    for members in sorted(comp, key=min):
        if center not in members:
            edges.add(norm_edge(center, min(members)))

    return GameInstance(n, frozenset(edges), interest_edges, CostVersion.MAX)


def _components(n: int, edges: set[Edge]) -> list[set[int]]:
    nbrs: dict[int, list[int]] = {v: [] for v in range(n)}
    for u, w in edges:
        nbrs[u].append(w)
        nbrs[w].append(u)
    seen: set[int] = set()
    comps: list[set[int]] = []
    for root in range(n):
        if root in seen:
            continue
        stack = [root]
        members = {root}
        seen.add(root)
        while stack:
            u = stack.pop()
            for w in nbrs[u]:
                if w not in seen:
                    seen.add(w)
                    members.add(w)
                    stack.append(w)
        comps.append(members)
    return comps


def gen_circle_lb(D: int) -> GeneratedInstance:
    """Cycle interests with a tree equilibrium whose worst cost equals D.

    n = D^2 - 2D + 3 nodes. The first 2D - 2 cycle nodes hang as leaves
    off an internal path; their costs climb 2..D and fall back D..2, one
    per step, and every internal node keeps both its cycle neighbors
    adjacent. The worst cost D equals sqrt(n - 2) + 1 exactly.
    """
    if D < 4:
        raise ParameterOutOfDomain(f"circle-lb needs D >= 4, got {D}")
    n = D * D - 2 * D + 3
    k = 2 * D - 3
    span = (D - 2) ** 2  # internal path edge count
    spine_base = k + 1  # id of the internal node at position 0

    def spine(pos: int) -> int:
        return spine_base + pos

    edges: set[Edge] = set()
    for pos in range(span):
        edges.add((spine(pos), spine(pos + 1)))

    certificate: dict[int, Cost] = {v: 1 for v in range(spine_base, n)}
    # Rising chain: cycle nodes 1..D-1 (ids 0..D-2) at triangular offsets
    # from the far end of the spine.
    for j in range(1, D):
        pos = span if j == 1 else span - (j - 2) * (j - 1) // 2
        edges.add(norm_edge(j - 1, spine(pos)))
        certificate[j - 1] = j + 1
    # Falling chain: cycle nodes D..2D-2 mirror the rising chain from the
    # near end of the spine.
    for t in range(1, D):
        label = 2 * D - 1 - t
        pos = 0 if t == 1 else (t - 2) * (t - 1) // 2
        edges.add(norm_edge(label - 1, spine(pos)))
        certificate[label - 1] = t + 1

    interests = {(i, (i + 1) % n) for i in range(n)}
    inst = GameInstance.from_edges(n, edges, interests, CostVersion.MAX)
    return _verified(inst, certificate, "circle-lb", {"D": D})


def gen_poa_lb(C: int) -> GeneratedInstance:
    """Path-plus-hubs interests whose equilibrium tree has linear-in-sqrt(n)
    costs on half the nodes.

    n = ((2C+3)^2 + 7) / 2. The interest path is folded around a spine so
    both hub endpoints sit C+1 hops from the satellite anchor; all n/2 + 1
    satellites attach there and cost exactly C + 2 each.
    """
    if C < 1:
        raise ParameterOutOfDomain(f"poa-lb needs C >= 1, got {C}")
    n = ((2 * C + 3) ** 2 + 7) // 2
    half = n // 2
    p = C + 1  # leaves folded back on each side
    span = C * C + C  # spine edge count
    spine_base = p  # id of the spine node at position 0
    anchor = spine_base + p * (p - 1) // 2 - (p - 1) + C  # satellite anchor id

    def spine(pos: int) -> int:
        return spine_base + pos

    edges: set[Edge] = set()
    for pos in range(span):
        edges.add((spine(pos), spine(pos + 1)))

    certificate: dict[int, Cost] = {spine(pos): 1 for pos in range(span + 1)}
    for t in range(1, p + 1):
        pos = 0 if t == 1 else (t - 2) * (t - 1) // 2
        left = p - t  # id of the t-th leaf counting back from the spine
        edges.add(norm_edge(left, spine(pos)))
        certificate[left] = t + 1
        right = p + span + t  # mirrored on the far side
        edges.add(norm_edge(right, spine(span - pos)))
        certificate[right] = t + 1

    for s in range(half - 1, n):
        edges.add(norm_edge(s, anchor))
        certificate[s] = C + 2

    interests: set[Edge] = {(i, i + 1) for i in range(half - 2)}
    for s in range(half - 1, n):
        interests.add(norm_edge(0, s))
        interests.add(norm_edge(half - 2, s))

    inst = GameInstance.from_edges(n, edges, interests, CostVersion.MAX)
    return _verified(inst, certificate, "poa-lb", {"C": C})


def gen_general_poa(n: int) -> GeneratedInstance:
    """Ring-with-satellites equilibrium on a general (cyclic) connection graph.

    Each of the n/2 ring nodes is interested in its three neighbors and
    costs 1; each satellite is interested in its ring node and in the two
    satellites n/6 ring steps away, costing n/6 + 2.
    """
    if n < 12 or n % 6 != 0:
        raise ParameterOutOfDomain(f"general-poa needs n >= 12 with n = 0 (mod 6), got {n}")
    m = n // 2
    offset = n // 6
    edges: set[Edge] = set()
    interests: set[Edge] = set()
    certificate: dict[int, Cost] = {}
    for i in range(m):
        edges.add(norm_edge(i, (i + 1) % m))
        edges.add((i, m + i))
        interests.add(norm_edge(i, (i + 1) % m))
        interests.add((i, m + i))
        interests.add(norm_edge(m + i, m + (i + offset) % m))
        certificate[i] = 1
        certificate[m + i] = offset + 2

    inst = GameInstance.from_edges(n, edges, interests, CostVersion.MAX)
    return _verified(inst, certificate, "general-poa", {"n": n})


def gen_avg_path(n: int) -> GeneratedInstance:
    """Path equilibrium for the AVG version with end costs of exactly n/2.

    Interests are the path pairs plus the two endpoints; each endpoint
    trades distance to its far interest one-for-one against its neighbor,
    so no swap strictly improves it.
    """
    if n < 4 or n % 2 != 0:
        raise ParameterOutOfDomain(f"avg-path needs even n >= 4, got {n}")
    edges = {(i, i + 1) for i in range(n - 1)}
    interests = set(edges) | {(0, n - 1)}
    certificate: dict[int, Cost] = {v: 1 for v in range(1, n - 1)}
    certificate[0] = Fraction(n, 2)
    certificate[n - 1] = Fraction(n, 2)
    inst = GameInstance.from_edges(n, edges, interests, CostVersion.AVG)
    return _verified(inst, certificate, "avg-path", {"n": n})


# Frozen 12-node instance on which best responses never settle. Nodes come
# in three groups of four (ids 0-3, 4-7, 8-11) that the relabeling
# id -> id + 4 (mod 12) maps onto each other; the whole instance is
# invariant under it except for one edge that the three "mover" nodes
# (2, 6, 10) rotate among themselves forever. Found once by bounded search
# over rotation-symmetric candidates and pinned here; gen_cycling_instance
# re-runs one pass to guard against engine drift.
CYCLING_N = 12
CYCLING_CONNECTION: tuple[Edge, ...] = (
    (0, 1), (1, 2), (1, 11), (2, 6), (3, 5), (4, 5),
    (5, 6), (6, 10), (7, 9), (8, 9), (9, 10),
)
CYCLING_INTERESTS: tuple[Edge, ...] = (
    (0, 1), (1, 2), (1, 6), (1, 11), (2, 6), (2, 9), (2, 10),
    (3, 5), (4, 5), (5, 6), (5, 10), (6, 10), (7, 9), (8, 9), (9, 10),
)
CYCLING_ORDER = tuple(range(12))
CYCLING_SWAPS = (Swap(2, 6, 10), Swap(6, 10, 2), Swap(10, 2, 6))


def gen_cycling_instance() -> tuple[GameInstance, Scheduler]:
    """The bundled non-convergence instance and its invocation schedule.

    Under the explicit schedule 0..11 exactly three swaps fire per pass,
    rotating one edge between the three movers, and the connection graph
    returns to its initial state after every pass. The frozen data is
    re-verified move by move on every call.
    """
    inst = GameInstance.from_edges(
        CYCLING_N, CYCLING_CONNECTION, CYCLING_INTERESTS, CostVersion.MAX
    )
    expected = {s.actor: s for s in CYCLING_SWAPS}
    current = inst
    for node in CYCLING_ORDER:
        step = best_response(current, node, SINGLE)
        want = expected.get(node)
        if want is None:
            if step is not None:
                raise ReconstructionFailed(
                    f"node {node} unexpectedly moves ({step}); contract broken"
                )
            continue
        if step is None or step.swaps != (want,):
            raise ReconstructionFailed(
                f"node {node} plays {step}, contract wants {want}"
            )
        current = apply_step(current, step)
    if canonical_state(current) != canonical_state(inst):
        raise ReconstructionFailed("state after one pass differs from the initial state")
    return inst, Scheduler.explicit(CYCLING_ORDER)
