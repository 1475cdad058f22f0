"""Command-line front end: generate, check, simulate, analyze, sweep.

Exit codes are a stable contract: 0 for success (or a positive
equilibrium verdict), 1 for a negative verdict, 2 for invalid input or
out-of-domain parameters. All randomness flows from explicit seeds; the
SWAPNET_SEED environment variable supplies the default.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import os
import random
import sys
from fractions import Fraction

import click

from . import constructions
from .analysis import (
    brute_force_optimum,
    build_max_arrangement,
    arrangement_stats,
    check_bounds,
    find_t_configuration,
    max_independent_set,
)
from .dynamics import (
    EquilibriumMode,
    Scheduler,
    canonical_state,
    is_equilibrium,
    run_dynamics,
    state_digest,
    Converged,
    Cycle,
)
from .errors import NotInEquilibrium, SwapnetError
from .files import dumps_instance, load_instance
from .model import (
    CostVersion,
    GameInstance,
    all_private_costs,
    validate_instance,
)
from .sampling import random_interest_edges

GENERATE_FAMILIES = ("alg1", "circle-lb", "poa-lb", "general-poa", "avg-path", "cycling")
SWEEP_FAMILIES = ("alg1", "circle-lb", "poa-lb", "general-poa", "avg-path")
CSV_HEADER = ("generator", "param", "n", "social_cost", "max_private_cost",
              "optimum", "ratio", "steps")


def _default_seed() -> int:
    return int(os.environ.get("SWAPNET_SEED", "0"))


def _fmt(value) -> str:
    """Plot-ready number formatting: integers plain, fractions as floats."""
    if isinstance(value, Fraction) and value.denominator == 1:
        value = int(value)
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def handle_errors(fn):
    """Map domain and input errors onto the exit-2 contract."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SwapnetError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


@click.group()
def main() -> None:
    """Build, simulate, verify and analyze swap-game instances."""


def _load_valid(path: str, require_tree: bool = False) -> GameInstance:
    inst, _ = load_instance(path)
    report = validate_instance(inst, require_tree=require_tree)
    if not report.is_valid:
        click.echo("invalid instance:", err=True)
        for violation in report.violations:
            click.echo(f"  - {violation}", err=True)
        sys.exit(2)
    return inst


@main.command()
@click.argument("family", type=click.Choice(GENERATE_FAMILIES))
@click.option("--D", "d_param", type=int, help="circle-lb: target worst cost (>= 4)")
@click.option("--C", "c_param", type=int, help="poa-lb: satellite ring offset (>= 1)")
@click.option("--n", "n_param", type=int, help="general-poa / avg-path: node count")
@click.option("--interests", "interests_path", type=click.Path(),
              help="alg1: take the interest graph from this instance file")
@click.option("--random-n", type=int, help="alg1: random interest graph on this many nodes")
@click.option("--seed", type=int, default=None, help="seed for --random-n (default SWAPNET_SEED)")
@click.option("--out", type=click.Path(), default=None, help="write here instead of stdout")
@handle_errors
def generate(family, d_param, c_param, n_param, interests_path, random_n, seed, out):
    """Emit a generated instance as canonical JSON."""
    metadata: dict = {"generator": family, "params": {}}
    if family == "circle-lb":
        if d_param is None:
            raise click.UsageError("circle-lb needs --D")
        gen = constructions.gen_circle_lb(d_param)
        inst, metadata["params"] = gen.instance, {"D": d_param}
    elif family == "poa-lb":
        if c_param is None:
            raise click.UsageError("poa-lb needs --C")
        gen = constructions.gen_poa_lb(c_param)
        inst, metadata["params"] = gen.instance, {"C": c_param}
    elif family == "general-poa":
        if n_param is None:
            raise click.UsageError("general-poa needs --n")
        gen = constructions.gen_general_poa(n_param)
        inst, metadata["params"] = gen.instance, {"n": n_param}
    elif family == "avg-path":
        if n_param is None:
            raise click.UsageError("avg-path needs --n")
        gen = constructions.gen_avg_path(n_param)
        inst, metadata["params"] = gen.instance, {"n": n_param}
    elif family == "cycling":
        inst, sched = constructions.gen_cycling_instance()
        metadata["scheduler"] = str(sched)
    else:  # alg1
        if interests_path is not None:
            source, _ = load_instance(interests_path)
            n, interest_edges = source.n, source.interest_edges
            metadata["params"] = {"interests": os.path.basename(interests_path)}
        elif random_n is not None:
            used = _default_seed() if seed is None else seed
            interest_edges = random_interest_edges(random_n, random.Random(used))
            n = random_n
            metadata["params"] = {"random_n": random_n, "seed": used}
        else:
            raise click.UsageError("alg1 needs --interests or --random-n")
        inst = constructions.build_equilibrium_alg1(n, interest_edges)

    text = dumps_instance(inst, metadata)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@main.command()
@click.argument("instance", type=click.Path())
@click.option("--mode", default="single", help="'single' or 'multi:k'")
@click.option("--require-tree", is_flag=True, help="also require the connection graph to be a tree")
@handle_errors
def check(instance, mode, require_tree):
    """Verify whether an instance is in equilibrium (exit 0 yes, 1 no)."""
    inst = _load_valid(instance, require_tree=require_tree)
    report = is_equilibrium(inst, EquilibriumMode.parse(mode))
    if report.is_equilibrium:
        click.echo(f"equilibrium: yes ({inst.version.value}, mode {report.mode})")
        if report.caveat:
            click.echo("caveat: some node with cost > 1 has degree > 1; "
                       "multi-swap deviations were not searched")
        sys.exit(0)
    click.echo(f"equilibrium: no ({inst.version.value}, mode {report.mode})")
    click.echo(f"witness: {report.witness}")
    sys.exit(1)


def _outcome_line(trace) -> str:
    outcome = trace.outcome
    if isinstance(outcome, Converged):
        return f"outcome: converged (last move at step {outcome.at_step})"
    if isinstance(outcome, Cycle):
        passes = outcome.period // trace.pass_length
        return (f"outcome: cycle (first {outcome.first}, period {outcome.period}"
                f" = {passes} pass(es))")
    return "outcome: budget exhausted"


@main.command()
@click.argument("instance", type=click.Path())
@click.option("--scheduler", "scheduler_spec", default="round-robin",
              help="'round-robin', 'random[:seed]' or 'explicit:i,j,...'")
@click.option("--mode", default="single")
@click.option("--max-steps", type=int, default=None, help="invocation budget (default 10*n^3)")
@click.option("--trace", "trace_path", type=click.Path(), default=None,
              help="write the full trace as JSON here")
@handle_errors
def simulate(instance, scheduler_spec, mode, max_steps, trace_path):
    """Run best-response dynamics under an invocation schedule."""
    inst = _load_valid(instance)
    sched = Scheduler.parse(scheduler_spec, default_seed=_default_seed())
    trace = run_dynamics(inst, sched, EquilibriumMode.parse(mode), max_steps)
    click.echo(_outcome_line(trace))
    click.echo(f"moves: {trace.move_count} over {len(trace.steps)} invocations")
    if trace_path:
        payload = {
            "scheduler": str(sched),
            "mode": mode,
            "pass_length": trace.pass_length,
            "outcome": {"kind": trace.outcome.kind,
                        **{k: v for k, v in vars(trace.outcome).items()}},
            "initial_state": state_digest(trace.states[0]),
            "steps": [
                {"t": i + 1, "node": node, "move": str(step) if step else None,
                 "state": state_digest(trace.states[i + 1])}
                for i, (node, step) in enumerate(trace.steps)
            ],
        }
        with open(trace_path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _analysis_payload(inst: GameInstance) -> dict:
    costs = all_private_costs(inst)
    is_tree = len(inst.connection_edges) == inst.n - 1
    payload: dict = {
        "n": inst.n,
        "version": inst.version.value,
        "is_tree": is_tree,
        "costs": {str(v): _fmt(c) for v, c in costs.items()},
        "social_cost": _fmt(sum(costs.values())),
        "max_private_cost": _fmt(max(costs.values())),
        "mis_size": len(max_independent_set(inst.n, inst.interest_edges)),
    }

    if is_tree:
        t_configs = {}
        for v in range(inst.n):
            if len(inst.interests_of(v)) >= 2:
                pair = find_t_configuration(inst, v)
                t_configs[str(v)] = list(pair) if pair else None
        payload["t_configurations"] = t_configs
    else:
        payload["t_configurations"] = "tree-only, skipped"

    if inst.version is not CostVersion.MAX:
        payload["arrangement"] = "MAX-only, skipped"
        payload["bounds"] = "MAX-only, skipped"
        return payload
    if not is_tree:
        payload["arrangement"] = "tree-only, skipped"
        payload["bounds"] = "tree-only, skipped"
        return payload

    bounds = check_bounds(inst)
    payload["bounds"] = [
        {"name": c.name, "holds": c.holds, "lhs": c.lhs, "rhs": c.rhs} for c in bounds.checks
    ]
    if bounds.max_private_cost > 3:
        arr = build_max_arrangement(inst)
        stats = arrangement_stats(inst, arr)
        payload["arrangement"] = {
            "nodes": list(arr.nodes),
            "start_cost": arr.start_cost,
            "total_length": stats.total_length,
            "distinct_edges": stats.distinct_edges,
            "max_edge_multiplicity": stats.max_edge_multiplicity,
        }
    else:
        payload["arrangement"] = "all costs <= 3, skipped"
    return payload


@main.command()
@click.argument("instance", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
@handle_errors
def analyze(instance, as_json):
    """Structural report for an instance already in equilibrium."""
    inst = _load_valid(instance)
    report = is_equilibrium(inst)
    if not report.is_equilibrium:
        click.echo("not in equilibrium; run `swapnet check` to see the witness", err=True)
        sys.exit(1)

    payload = _analysis_payload(inst)
    if as_json:
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
        return
    click.echo(f"n: {payload['n']}  version: {payload['version']}  tree: {payload['is_tree']}")
    click.echo(f"social cost: {payload['social_cost']}")
    click.echo(f"max private cost: {payload['max_private_cost']}")
    click.echo(f"interest-graph MIS size: {payload['mis_size']}")
    click.echo("per-node costs: "
               + " ".join(f"{v}:{payload['costs'][str(v)]}" for v in range(inst.n)))
    if isinstance(payload["t_configurations"], str):
        click.echo(f"T-configurations: {payload['t_configurations']}")
    else:
        pairs = ", ".join(f"{v}->({x},{y})" for v, xy in payload["t_configurations"].items()
                          if xy for x, y in [xy])
        click.echo(f"T-configurations: {pairs or 'none required'}")
    if isinstance(payload["arrangement"], str):
        click.echo(f"arrangement: {payload['arrangement']}")
    else:
        arr = payload["arrangement"]
        click.echo(f"arrangement: nodes {arr['nodes']} total_length {arr['total_length']} "
                   f"distinct_edges {arr['distinct_edges']} "
                   f"max_multiplicity {arr['max_edge_multiplicity']}")
    if isinstance(payload["bounds"], str):
        click.echo(f"bounds: {payload['bounds']}")
    else:
        for chk in payload["bounds"]:
            verdict = "holds" if chk["holds"] else "VIOLATED"
            click.echo(f"bound {chk['name']}: {chk['lhs']} <= {chk['rhs']} {verdict}")


def _parse_params(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.split(",") if tok != ""]


@main.command()
@click.argument("family", type=click.Choice(SWEEP_FAMILIES))
@click.option("--params", required=True, help="parameter range '4..8' or list '4,6,8'")
@click.option("--optimum", is_flag=True, help="also compute the brute-force optimum (n <= 8)")
@click.option("--seed", type=int, default=None, help="seed for alg1 random interests")
@click.option("--csv", "csv_path", type=click.Path(), required=True)
@handle_errors
def sweep(family, params, optimum, seed, csv_path):
    """Generate a family across a parameter range and emit a CSV."""
    values = _parse_params(params)
    base_seed = _default_seed() if seed is None else seed
    rows = []
    for value in values:
        if family == "circle-lb":
            gen = constructions.gen_circle_lb(value)
        elif family == "poa-lb":
            gen = constructions.gen_poa_lb(value)
        elif family == "general-poa":
            gen = constructions.gen_general_poa(value)
        elif family == "avg-path":
            gen = constructions.gen_avg_path(value)
        else:  # alg1 over random interests on n = value nodes
            rng = random.Random(f"{base_seed}-{value}")
            inst = constructions.build_equilibrium_alg1(
                value, random_interest_edges(value, rng)
            )
            gen = None
        inst = gen.instance if gen else inst
        costs = all_private_costs(inst)
        social = sum(costs.values())
        opt_text = ""
        if optimum:
            _, opt = brute_force_optimum(inst.n, inst.interest_edges, inst.version)
            opt_text = _fmt(opt)
            ratio = Fraction(social) / Fraction(opt)
        else:
            ratio = Fraction(social) / inst.n
        rows.append((family, value, inst.n, _fmt(social), _fmt(max(costs.values())),
                     opt_text, _fmt(ratio), ""))

    # Rows are fully computed before the file is opened, so a failed sweep
    # never leaves a partial CSV behind.
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(rows)
    with open(csv_path, "w") as fh:
        fh.write(buffer.getvalue())
    click.echo(f"wrote {len(rows)} row(s) to {csv_path}")


if __name__ == "__main__":
    main()
