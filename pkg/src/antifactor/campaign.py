"""Batch verification over random regular bipartite graphs.

Every regular bipartite graph of degree at least 3 should admit a solution;
the campaign generates seeded instances, solves each, verifies the
assignment, and cross-checks small instances against the exhaustive oracle.
Any failure is a counterexample report, not an expected outcome. The
returned document is deterministic for a given configuration: it carries no
timing and all randomness flows from the single seed.
"""

from __future__ import annotations

import random
from typing import Sequence

from .degree_specs import SpecKind, make_spec
from .generators import random_regular_bipartite
from .oracle import min_deviation
from .solver import SolveStatus, solve_regular, verify_anti_factor

CAMPAIGN_ENUM_CAP = 30  # fits 5-regular instances on 6+6 vertices


def theorem_campaign(
    count: int = 500,
    seed: int = 0,
    ks: Sequence[int] = (3, 4, 5),
    x_range: tuple[int, int] = (4, 50),
    *,
    budget: int | None = None,
    oracle_max_x: int = 6,
    enum_cap: int = CAMPAIGN_ENUM_CAP,
    jobs: int = 1,
) -> dict:
    """Solve `count` random regular instances and report failures, if any.

    Degrees are drawn from ks restricted to k <= n (5-regular needs at least
    5 vertices a side). Instances with |X| <= oracle_max_x are additionally
    checked to have oracle minimum deviation zero.
    """
    rng = random.Random(seed)
    failures: list[dict] = []
    oracle_checked = 0
    totals = {"nodes": 0, "propagations": 0, "backtracks": 0}
    for index in range(count):
        n = rng.randint(x_range[0], x_range[1])
        k = rng.choice([k for k in ks if k <= n])
        graph_seed = rng.randrange(1 << 63)
        graph = random_regular_bipartite(n, k, graph_seed)
        instance = {"instance": index, "k": k, "n": n, "graph_seed": graph_seed}
        outcome = solve_regular(graph, budget=budget)
        totals["nodes"] += outcome.stats.nodes
        totals["propagations"] += outcome.stats.propagations
        totals["backtracks"] += outcome.stats.backtracks
        if outcome.status is not SolveStatus.SAT:
            failures.append({**instance, "reason": outcome.status.value})
        elif not verify_anti_factor(graph, outcome.assignment.targets):
            failures.append({**instance, "reason": "verification failed"})
        if n <= oracle_max_x:
            oracle_checked += 1
            value, _ = min_deviation(
                graph, make_spec(SpecKind.ONE_PM, graph), enum_cap=enum_cap, jobs=jobs
            )
            if value != 0:
                failures.append(
                    {**instance, "reason": f"oracle minimum deviation {value}"}
                )
    return {
        "count": count,
        "seed": seed,
        "ks": list(ks),
        "x_range": list(x_range),
        "oracle_checked": oracle_checked,
        "failures": failures,
        "all_passed": not failures,
        "solver_totals": totals,
    }
