"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest -v -s tests/test_acceptance.py` to see the per-criterion
report. Expected values are exact; there are no tolerances to tune.
"""

import math
import random
from fractions import Fraction

import pytest
from click.testing import CliRunner

import oracles
from swapnet.analysis import (
    arrangement_stats,
    brute_force_optimum,
    build_max_arrangement,
    find_t_configuration,
    max_independent_set,
)
from swapnet.cli import main as cli_main
from swapnet.constructions import (
    build_equilibrium_alg1,
    gen_avg_path,
    gen_circle_lb,
    gen_cycling_instance,
    gen_general_poa,
    gen_poa_lb,
)
from swapnet.dynamics import (
    SINGLE,
    Converged,
    Cycle,
    Scheduler,
    canonical_state,
    is_equilibrium,
    run_dynamics,
)
from swapnet.model import (
    CostVersion,
    all_private_costs,
    norm_edge,
    social_cost,
    validate_instance,
)
from swapnet.sampling import random_interest_edges, random_tree_instance


def passed(num: int, text: str) -> None:
    print(f"[criterion {num:2d}] PASS  {text}")


def exact_sqrt(value: int) -> int:
    root = math.isqrt(value)
    assert root * root == value, f"{value} is not a perfect square"
    return root


@pytest.fixture(scope="module")
def circle_family():
    return {D: gen_circle_lb(D) for D in range(4, 9)}


@pytest.fixture(scope="module")
def alg1_equilibria():
    """200 seeded interest graphs per n; every output already a verified
    tree equilibrium (asserted in criterion 2)."""
    out = []
    for n in (5, 10, 20, 50):
        for seed in range(200):
            rng = random.Random(f"alg1-{n}-{seed}")
            interests = random_interest_edges(n, rng)
            out.append(build_equilibrium_alg1(n, interests))
    return out


@pytest.fixture(scope="module")
def dynamics_equilibria():
    """Final states of converged round-robin runs from 500 seeded trees."""
    finals = []
    outcomes = {"converged": 0, "cycle": 0, "budget_exhausted": 0}
    for seed in range(500):
        rng = random.Random(seed)
        n = 4 + seed % 27  # n <= 30
        inst = random_tree_instance(n, rng)
        trace = run_dynamics(inst, Scheduler.round_robin(), max_steps=10 * n**3)
        outcomes[trace.outcome.kind] += 1
        if isinstance(trace.outcome, Converged):
            finals.append(inst.with_connection(trace.states[-1]))
    print(f"\n[dynamics corpus] {outcomes}")
    assert outcomes["budget_exhausted"] == 0
    return finals


def arrangement_property_violations(inst) -> list[str]:
    """All arrangement/bound property violations for one equilibrium tree."""
    bad: list[str] = []
    costs = all_private_costs(inst)
    d_max = int(max(costs.values()))
    if d_max <= 3:
        return bad
    if d_max * d_max + d_max - 6 > 4 * (inst.n - 1):
        bad.append(f"square bound fails: D={d_max} n={inst.n}")
    arr = build_max_arrangement(inst)
    if len(set(arr.nodes)) != len(arr.nodes):
        bad.append("repeated node in arrangement")
    c0 = arr.start_cost
    for i, (dist, nxt_cost) in enumerate(arr.per_step):
        here = int(costs[arr.nodes[i]])
        if dist < here - 1:
            bad.append(f"step {i}: distance {dist} < c - 1 = {here - 1}")
        if nxt_cost < here - 1:
            bad.append(f"step {i}: next cost {nxt_cost} < c - 1 = {here - 1}")
    stats = arrangement_stats(inst, arr)
    if stats.max_edge_multiplicity > 2:
        bad.append(f"edge multiplicity {stats.max_edge_multiplicity} > 2")
    if 4 * stats.distinct_edges < c0 * c0 + c0 - 6:
        bad.append(f"distinct edges {stats.distinct_edges} below (c^2+c-6)/4")
    mis = max_independent_set(inst.n, inst.interest_edges)
    if len(arr.nodes) > 2 * len(mis):
        bad.append(f"arrangement size {len(arr.nodes)} > 2*MIS = {2 * len(mis)}")
    prefix = [arr.nodes[i] for i in range(0, len(arr.nodes), 2) if i < len(arr.nodes) - 1]
    for i, u in enumerate(prefix):
        for w in prefix[i + 1 :]:
            if norm_edge(u, w) in inst.interest_edges:
                bad.append(f"even-index nodes {u},{w} are mutually interested")
    return bad


def test_criterion_1_circle_lb_reproduction(circle_family):
    for D, gen in circle_family.items():
        inst = gen.instance
        assert inst.n == D * D - 2 * D + 3
        assert validate_instance(inst, require_tree=True).is_valid
        assert is_equilibrium(inst, SINGLE).is_equilibrium
        d_max = max(all_private_costs(inst).values())
        assert d_max == exact_sqrt(inst.n - 2) + 1 == D
    passed(1, "circle-lb D=4..8: n = D^2-2D+3, equilibrium, max cost = sqrt(n-2)+1 = D")


def test_criterion_2_alg1_and_pos(alg1_equilibria):
    for tree in alg1_equilibria:
        assert validate_instance(tree, require_tree=True).is_valid
        costs = all_private_costs(tree)
        assert max(costs.values()) <= 2
        assert sum(costs.values()) <= 2 * tree.n
        assert is_equilibrium(tree, SINGLE).is_equilibrium
    for seed in range(100):
        rng = random.Random(f"pos-{seed}")
        n = rng.randrange(2, 7)
        interests = random_interest_edges(n, rng)
        cost = social_cost(build_equilibrium_alg1(n, interests))
        _, optimum = brute_force_optimum(n, interests, CostVersion.MAX)
        assert cost <= 2 * optimum
    passed(2, "alg1: 800 equilibria with cost <= 2 per node and social <= 2n; "
              "100 small instances within twice the optimum (PoS <= 2)")


def test_criterion_3_poa_lb():
    for C in (1, 2, 3):
        gen = gen_poa_lb(C)
        inst = gen.instance
        n = inst.n
        assert n == ((2 * C + 3) ** 2 + 7) // 2
        assert is_equilibrium(inst, SINGLE).is_equilibrium
        expected = (exact_sqrt(2 * n - 7) + 1) // 2
        assert expected == C + 2
        costs = all_private_costs(inst)
        for s in range(n // 2 - 1, n):
            assert costs[s] == expected
        assert social_cost(inst) >= (n // 2) * (C + 2)
    passed(3, "poa-lb C=1..3 (n=16,28,44): equilibrium, designated cost = "
              "(sqrt(2n-7)+1)/2 = C+2, social >= (n/2)(C+2)")


def test_criterion_4_general_poa():
    ratios = []
    for n in (12, 18, 24, 30):
        gen = gen_general_poa(n)
        inst = gen.instance
        assert is_equilibrium(inst, SINGLE).is_equilibrium
        costs = all_private_costs(inst)
        for s in range(n // 2, n):
            assert costs[s] == n // 6 + 2
        social = social_cost(inst)
        assert social == n // 2 + (n // 2) * (n // 6 + 2)
        ratios.append(Fraction(social, n))
    for ratio, n in zip(ratios, (12, 18, 24, 30)):
        assert ratio == Fraction(n, 12) + Fraction(3, 2)  # slope exactly 1/12
    assert ratios == sorted(set(ratios))
    passed(4, "general-poa n=12..30: equilibrium, satellite cost n/6+2, "
              "social = n/2 + (n/2)(n/6+2), ratio grows with slope 1/12")


def test_criterion_5_avg_path():
    for n in range(4, 21, 2):
        gen = gen_avg_path(n)
        inst = gen.instance
        assert inst.version is CostVersion.AVG
        assert is_equilibrium(inst, SINGLE).is_equilibrium
        costs = all_private_costs(inst)
        assert costs[0] == Fraction(n, 2) == costs[n - 1]
    passed(5, "avg-path even n=4..20: AVG equilibrium with endpoint cost exactly n/2")


def test_criterion_6_cycling():
    inst, sched = gen_cycling_instance()
    pass_len = sched.pass_length(inst.n)
    trace = run_dynamics(inst, sched, max_steps=10 * pass_len)
    assert isinstance(trace.outcome, Cycle)
    assert trace.outcome.period == pass_len
    assert trace.states[trace.outcome.first] == trace.states[trace.outcome.first + pass_len]
    assert trace.states[trace.outcome.first] == canonical_state(inst)
    passed(6, "cycling instance: one-pass cycle back to the initial state")


def test_criterion_7_arrangement_suite(circle_family, dynamics_equilibria):
    violations: list[str] = []
    arrangements = 0
    for gen in circle_family.values():
        errs = arrangement_property_violations(gen.instance)
        violations.extend(errs)
        arrangements += 1
    for inst in dynamics_equilibria:
        assert is_equilibrium(inst, SINGLE).is_equilibrium
        if max(all_private_costs(inst).values()) > 3:
            arrangements += 1
        violations.extend(arrangement_property_violations(inst))
    assert violations == []
    passed(7, f"arrangement suite: zero violations over {len(dynamics_equilibria)} "
              f"dynamics equilibria + 5 circle-lb instances ({arrangements} arrangements built)")


def test_criterion_8_oracle_equivalence():
    for seed in range(1000):
        rng = random.Random(seed)
        inst = random_tree_instance(4 + seed % 4, rng)  # n in 4..7
        assert is_equilibrium(inst, SINGLE).is_equilibrium == oracles.is_equilibrium_naive(inst)
    for seed in range(40):
        rng = random.Random(f"opt-{seed}")
        n = rng.randrange(2, 7)
        interests = random_interest_edges(n, rng)
        _, mine = brute_force_optimum(n, interests, CostVersion.MAX)
        assert mine == oracles.optimum_recursive(n, interests, "MAX")
    passed(8, "1000 instances match the naive all-triples oracle; optima match "
              "the recursive tree-enumeration oracle")


def test_criterion_9_equilibrium_invariants(circle_family, alg1_equilibria,
                                            dynamics_equilibria):
    corpus = [gen.instance for gen in circle_family.values()]
    corpus += alg1_equilibria
    corpus += dynamics_equilibria
    for inst in corpus:
        costs = all_private_costs(inst)
        for v in range(inst.n):
            if len(inst.interests_of(v)) == 1:
                assert costs[v] == 1
            else:
                assert find_t_configuration(inst, v) is not None
    passed(9, f"over {len(corpus)} verified equilibria: every single-interest node "
              "has cost 1 and every multi-interest node admits a T-configuration")


def test_criterion_10_sweep_and_scale_statement(tmp_path):
    # The asymptotic constants behind the Theta(sqrt(n)) and Theta(n) PoA
    # results are not reproducible at desk scale; the binding checks are the
    # exact finite equalities of criteria 1, 3 and 4 plus this sweep, whose
    # worst-cost column deviates from sqrt(n-2)+1 by exactly zero.
    out = tmp_path / "circle.csv"
    result = CliRunner().invoke(
        cli_main, ["sweep", "circle-lb", "--params", "4..8", "--csv", str(out)]
    )
    assert result.exit_code == 0
    rows = [line.split(",") for line in out.read_text().strip().splitlines()[1:]]
    ns = [int(r[2]) for r in rows]
    max_costs = [int(r[4]) for r in rows]
    assert ns == sorted(ns)
    assert max_costs == sorted(max_costs)  # monotone growth with sqrt(n)
    for n, cost, row in zip(ns, max_costs, rows):
        assert cost == exact_sqrt(n - 2) + 1 == int(row[1])  # zero deviation
    passed(10, "sweep: circle-lb worst cost vs sqrt(n-2)+1 has zero deviation; "
               "asymptotic Theta-constants substituted by exact finite equalities")
