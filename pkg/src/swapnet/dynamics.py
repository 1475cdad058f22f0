"""Improving-move search, equilibrium verification, and swap dynamics.

Best responses are exact: every connectivity-preserving single swap (and,
in multi mode, every simultaneous swap set up to size k) is enumerated and
evaluated with exact arithmetic. On trees a swap v:[x->w] keeps the graph
connected iff w lies in the component of x after deleting {v, x}; that
component test and the reuse of within-component distances make the tree
path fast. Non-tree instances fall back to full recomputation per
candidate.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import ParameterOutOfDomain
from .model import (
    Cost,
    CostVersion,
    Edge,
    GameInstance,
    ImprovingStep,
    Swap,
    apply_step,
    bfs_distances,
    cost_from_distances,
    edges_connected,
    norm_edge,
)

Fingerprint = tuple[Edge, ...]


def canonical_state(inst: GameInstance) -> Fingerprint:
    """Injective fingerprint of the connection graph: the sorted edge tuple.

    Equal fingerprints hold exactly when the connection graphs are equal;
    no hashing is involved, so there is nothing to collision-check.
    """
    return tuple(sorted(inst.connection_edges))


def state_digest(fp: Fingerprint) -> str:
    """Short hex digest of a fingerprint for logs and trace files."""
    return hashlib.sha256(repr(fp).encode()).hexdigest()[:12]


@dataclass(frozen=True)
class EquilibriumMode:
    """Search width for deviations: single swaps or up to k simultaneous."""

    max_swaps: int = 1

    def __post_init__(self) -> None:
        if self.max_swaps < 1:
            raise ParameterOutOfDomain("mode needs max_swaps >= 1")

    @classmethod
    def single(cls) -> "EquilibriumMode":
        return cls(1)

    @classmethod
    def multi(cls, k: int) -> "EquilibriumMode":
        return cls(k)

    @classmethod
    def parse(cls, text: str) -> "EquilibriumMode":
        if text == "single":
            return cls.single()
        if text.startswith("multi:"):
            return cls.multi(int(text.split(":", 1)[1]))
        raise ParameterOutOfDomain(f"unknown mode {text!r}; use 'single' or 'multi:k'")

    @property
    def is_single(self) -> bool:
        return self.max_swaps == 1

    def __str__(self) -> str:
        return "single" if self.is_single else f"multi:{self.max_swaps}"


SINGLE = EquilibriumMode(1)


@dataclass(frozen=True)
class Scheduler:
    """Invocation order spec: round-robin, seeded random, or explicit list.

    Random schedulers draw a fresh seeded permutation of all nodes each
    pass, so every pass contains every node and the whole run is determined
    by the seed. Explicit lists repeat cyclically and may omit nodes.
    """

    kind: str  # "round-robin" | "random" | "explicit"
    seed: int | None = None
    order: tuple[int, ...] | None = None

    @classmethod
    def round_robin(cls) -> "Scheduler":
        return cls("round-robin")

    @classmethod
    def random_order(cls, seed: int) -> "Scheduler":
        return cls("random", seed=seed)

    @classmethod
    def explicit(cls, order: list[int] | tuple[int, ...]) -> "Scheduler":
        if not order:
            raise ParameterOutOfDomain("explicit scheduler needs a nonempty node list")
        return cls("explicit", order=tuple(order))

    @classmethod
    def parse(cls, text: str, default_seed: int = 0) -> "Scheduler":
        if text == "round-robin":
            return cls.round_robin()
        if text == "random":
            return cls.random_order(default_seed)
        if text.startswith("random:"):
            return cls.random_order(int(text.split(":", 1)[1]))
        if text.startswith("explicit:"):
            ids = [int(tok) for tok in text.split(":", 1)[1].split(",") if tok != ""]
            return cls.explicit(ids)
        raise ParameterOutOfDomain(
            f"unknown scheduler {text!r}; use 'round-robin', 'random[:seed]' or 'explicit:i,j,...'"
        )

    def pass_length(self, n: int) -> int:
        return len(self.order) if self.kind == "explicit" else n

    def __str__(self) -> str:
        if self.kind == "random":
            return f"random:{self.seed}"
        if self.kind == "explicit":
            return "explicit:" + ",".join(map(str, self.order or ()))
        return self.kind


@dataclass(frozen=True)
class EquilibriumReport:
    """Verdict of an equilibrium check plus the refuting step, if any.

    `caveat` is set when the check ran in single mode while some node with
    private cost > 1 also has degree > 1; such a node could in principle
    hold a simultaneous-swap deviation the single-swap search does not
    visit.
    """

    is_equilibrium: bool
    mode: EquilibriumMode
    witness: ImprovingStep | None
    caveat: bool


@dataclass(frozen=True)
class Converged:
    at_step: int  # invocation index of the last applied move; 0 if none

    kind = "converged"


@dataclass(frozen=True)
class Cycle:
    first: int  # invocation index (a pass boundary) where the loop starts
    period: int  # in invocations; always a multiple of the pass length

    kind = "cycle"


@dataclass(frozen=True)
class BudgetExhausted:
    kind = "budget_exhausted"


Outcome = Converged | Cycle | BudgetExhausted


@dataclass(frozen=True)
class DynamicsTrace:
    """Ordered record of a dynamics run.

    states[0] is the initial fingerprint and states[t] the state after
    invocation t, so consecutive states differ exactly by the recorded
    step (or are equal when the invoked node passed).
    """

    steps: tuple[tuple[int, ImprovingStep | None], ...]
    states: tuple[Fingerprint, ...]
    outcome: Outcome
    pass_length: int

    @property
    def move_count(self) -> int:
        return sum(1 for _, step in self.steps if step is not None)


def _swap_candidates(inst: GameInstance, v: int, x: int) -> tuple[bool, list[int]]:
    """Targets w for which v:[x->w] keeps the graph connected.

    Returns (is_bridge, candidates). If {v, x} is a bridge (always, on a
    tree) the candidates are exactly the far component minus x itself;
    otherwise any non-neighbor of v qualifies.
    """
    e = norm_edge(v, x)
    adj = inst.adjacency
    reach = {x: 0}
    queue = [x]
    while queue:
        u = queue.pop()
        for w in adj[u]:
            if norm_edge(u, w) == e or w in reach:
                continue
            reach[w] = 0
            queue.append(w)
    if v in reach:
        nbrs = set(adj[v])
        return False, [w for w in range(inst.n) if w != v and w not in nbrs]
    return True, sorted(set(reach) - {x})


def _cost_after_swap(inst: GameInstance, swap: Swap) -> Cost:
    """Actor's private cost after the swap, by full recomputation."""
    new_edges = (set(inst.connection_edges) - {swap.dropped_edge}) | {swap.added_edge}
    nbrs: dict[int, list[int]] = {u: [] for u in range(inst.n)}
    for a, b in new_edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    dist = bfs_distances(nbrs, swap.actor)
    return cost_from_distances(dist, inst.interests_of(swap.actor), inst.version)


def enumerate_improving_swaps(inst: GameInstance, v: int) -> list[tuple[Swap, Cost]]:
    """All single swaps by v that keep the graph connected and strictly
    lower c(v), with the resulting cost. Empty list: no single-swap
    improvement exists.
    """
    interests = inst.interests_of(v)
    dist_v = bfs_distances(inst.adjacency, v)
    current = cost_from_distances(dist_v, interests, inst.version)
    if current == 1:
        return []

    tree = len(inst.connection_edges) == inst.n - 1
    tables: dict[int, dict[int, int]] = {}
    if tree:
        tables = {u: bfs_distances(inst.adjacency, u) for u in interests}

    found: list[tuple[Swap, Cost]] = []
    for x in inst.adjacency[v]:
        is_bridge, candidates = _swap_candidates(inst, v, x)
        if tree and is_bridge:
            far = set(candidates) | {x}
            near_interests = [u for u in interests if u not in far]
            far_interests = [u for u in interests if u in far]
            if not far_interests:
                continue  # moving this edge cannot shorten anything
            if inst.version is CostVersion.MAX:
                near_max = max((dist_v[u] for u in near_interests), default=0)
                for w in candidates:
                    cost = max(near_max, 1 + max(tables[u][w] for u in far_interests))
                    if cost < current:
                        found.append((Swap(v, x, w), cost))
            else:
                near_sum = sum(dist_v[u] for u in near_interests)
                k = len(interests)
                for w in candidates:
                    total = near_sum + sum(1 + tables[u][w] for u in far_interests)
                    cost = Fraction(total, k)
                    if cost < current:
                        found.append((Swap(v, x, w), cost))
        else:
            for w in candidates:
                swap = Swap(v, x, w)
                cost = _cost_after_swap(inst, swap)
                if cost < current:
                    found.append((swap, cost))
    return found


def _multi_steps(
    inst: GameInstance, v: int, k: int, current: Cost
) -> list[tuple[ImprovingStep, Cost]]:
    """Exact enumeration of improving steps with 2..k simultaneous swaps.

    Exponential in degree; intended for small regression instances. The
    resulting graph depends only on the dropped-edge set and the added
    endpoint set, so swaps are paired canonically (both sorted).
    """
    adj = inst.adjacency[v]
    non_neighbors = sorted(set(range(inst.n)) - {v} - set(adj))
    interests = inst.interests_of(v)
    base = set(inst.connection_edges)
    found: list[tuple[ImprovingStep, Cost]] = []
    for size in range(2, min(k, len(adj)) + 1):
        for dropped in combinations(adj, size):
            removed = base - {norm_edge(v, x) for x in dropped}
            for added in combinations(non_neighbors, size):
                new_edges = removed | {norm_edge(v, w) for w in added}
                nbrs: dict[int, list[int]] = {u: [] for u in range(inst.n)}
                for a, b in new_edges:
                    nbrs[a].append(b)
                    nbrs[b].append(a)
                dist = bfs_distances(nbrs, v)
                if len(dist) != inst.n:
                    continue
                cost = cost_from_distances(dist, interests, inst.version)
                if cost < current:
                    swaps = tuple(Swap(v, x, w) for x, w in zip(dropped, added))
                    found.append((ImprovingStep(v, swaps), cost))
    return found


def _step_sort_key(item: tuple[ImprovingStep, Cost]):
    step, cost = item
    return (cost, len(step.swaps), tuple((s.dropped, s.added) for s in step.swaps))


def best_response(
    inst: GameInstance, v: int, mode: EquilibriumMode = SINGLE
) -> ImprovingStep | None:
    """The step reaching v's minimum cost within the mode, or None.

    Ties break deterministically: fewest swaps, then lexicographically
    smallest (dropped, added) pair list.
    """
    current = cost_from_distances(
        bfs_distances(inst.adjacency, v), inst.interests_of(v), inst.version
    )
    if current == 1:
        return None
    options: list[tuple[ImprovingStep, Cost]] = [
        (ImprovingStep(v, (swap,)), cost) for swap, cost in enumerate_improving_swaps(inst, v)
    ]
    if mode.max_swaps > 1:
        options.extend(_multi_steps(inst, v, mode.max_swaps, current))
    if not options:
        return None
    return min(options, key=_step_sort_key)[0]


def is_equilibrium(inst: GameInstance, mode: EquilibriumMode = SINGLE) -> EquilibriumReport:
    """Check whether no node has a best response within the mode.

    The witness, when present, is the best response of the lowest-id
    improvable node.
    """
    costs = {
        v: cost_from_distances(
            bfs_distances(inst.adjacency, v), inst.interests_of(v), inst.version
        )
        for v in range(inst.n)
    }
    caveat = mode.is_single and any(
        costs[v] > 1 and len(inst.adjacency[v]) > 1 for v in range(inst.n)
    )
    witness = None
    for v in range(inst.n):
        if costs[v] == 1:
            continue
        witness = best_response(inst, v, mode)
        if witness is not None:
            break
    return EquilibriumReport(witness is None, mode, witness, caveat)


def _pass_order(sched: Scheduler, n: int, rng: random.Random | None) -> list[int]:
    if sched.kind == "explicit":
        return list(sched.order or ())
    order = list(range(n))
    if sched.kind == "random":
        assert rng is not None
        rng.shuffle(order)
    return order


def _boundary_key(fp: Fingerprint, rng: random.Random | None):
    if rng is None:
        return fp
    # The RNG state is folded in so a repeated key implies a genuinely
    # periodic future even under the random scheduler.
    return fp, hashlib.sha256(repr(rng.getstate()).encode()).hexdigest()


def run_dynamics(
    inst: GameInstance,
    sched: Scheduler,
    mode: EquilibriumMode = SINGLE,
    max_steps: int | None = None,
) -> DynamicsTrace:
    """Run best-response swap dynamics under an invocation schedule.

    Each invoked node applies its best response or passes. The run
    converges once a full pass applies no move, reports a cycle when a
    pass-boundary state (plus scheduler phase and RNG state) repeats, and
    otherwise stops after max_steps invocations (default 10*n^3).

    Cycle first/period are counted in invocations and are always whole
    passes: with a deterministic engine, matching boundary snapshots make
    the continuation periodic, and a repeat at any phase forces the phases
    to agree modulo the pass length.
    """
    n = inst.n
    if max_steps is None:
        max_steps = 10 * n**3
    if max_steps < 1:
        raise ParameterOutOfDomain("max_steps must be >= 1")

    rng = random.Random(sched.seed) if sched.kind == "random" else None
    current = inst
    states: list[Fingerprint] = [canonical_state(inst)]
    steps: list[tuple[int, ImprovingStep | None]] = []
    seen: dict[object, int] = {_boundary_key(states[0], rng): 0}
    t = 0
    last_move = 0
    outcome: Outcome | None = None

    while outcome is None:
        moves_in_pass = 0
        order = _pass_order(sched, n, rng)
        for idx, node in enumerate(order):
            step = best_response(current, node, mode)
            if step is not None:
                current = apply_step(current, step)
                moves_in_pass += 1
                last_move = t + 1
            steps.append((node, step))
            states.append(canonical_state(current))
            t += 1
            if t >= max_steps and idx != len(order) - 1:
                outcome = BudgetExhausted()
                break
        if outcome is not None:
            break
        if moves_in_pass == 0:
            outcome = Converged(at_step=last_move)
        else:
            key = _boundary_key(states[-1], rng)
            if key in seen:
                outcome = Cycle(first=seen[key], period=t - seen[key])
            else:
                seen[key] = t
                if t >= max_steps:
                    outcome = BudgetExhausted()

    return DynamicsTrace(tuple(steps), tuple(states), outcome, sched.pass_length(n))
