from __future__ import annotations

import pytest

from porplan import (
    Limits,
    astar,
    bfs,
    gbfs,
    make_heuristic,
    make_strategy,
    validate_plan,
)
from porplan.oracle import (
    RandomTaskSpec,
    TooLarge,
    brute_force_optimal_cost,
    enumerate_state_space,
    generate_random_task,
)
from porplan.search import RESOURCE_LIMIT, SOLVED, UNSOLVABLE
from porplan.strategies import StrategyConfig


def distinct(task, kind):
    return make_strategy(task, kind, StrategyConfig(strat_tie_break="distinct"))


def tasks_with_graphs(count, **kw):
    out = []
    seed = 0
    while len(out) < count:
        task = generate_random_task(RandomTaskSpec(seed=seed, **kw))
        seed += 1
        try:
            graph = enumerate_state_space(task)
        except TooLarge:
            continue
        out.append((task, graph))
    return out


def test_astar_two_switches(two_switches):
    result = astar(
        two_switches, make_heuristic(two_switches, "hmax"), make_strategy(two_switches, "none")
    )
    assert result.outcome == SOLVED
    assert result.plan.cost == 2
    assert result.expanded >= 3
    validate_plan(two_switches, result.plan.steps)


def test_astar_uniform_cost_ec_expands_three(two_switches):
    result = astar(
        two_switches, make_heuristic(two_switches, "zero"), make_strategy(two_switches, "ec")
    )
    assert result.outcome == SOLVED and result.expanded == 3


def test_unsolvable(build):
    task = build(domains=[2, 2], actions=[("o", [(0, 0)], [(0, 1)])],
                 initial=[0, 0], goal=[(1, 1)])
    for kind in ("none", "ec", "sp", "sac"):
        result = astar(task, make_heuristic(task, "blind"), make_strategy(task, kind))
        assert result.outcome == UNSOLVABLE


def test_gbfs(two_switches):
    result = gbfs(
        two_switches, make_heuristic(two_switches, "hadd"), make_strategy(two_switches, "sac")
    )
    assert result.outcome == SOLVED and result.plan.cost == 2

    result = gbfs(
        two_switches, make_heuristic(two_switches, "goalcount"), distinct(two_switches, "sp")
    )
    assert result.outcome == SOLVED and result.expanded == 4


def test_bfs_golden_counts(two_switches):
    for kind, expanded in [("none", 4), ("ec", 3), ("sp", 4), ("sac", 3)]:
        result = bfs(two_switches, distinct(two_switches, kind))
        assert result.outcome == SOLVED
        assert result.plan.cost == 2
        assert result.expanded == expanded, kind


def test_bfs_requires_unit_costs(build):
    task = build(domains=[2], actions=[("o", [(0, 0)], [(0, 1)], 3)],
                 initial=[0], goal=[(0, 1)], uses_metric=True)
    with pytest.raises(ValueError):
        bfs(task, make_strategy(task, "none"))


def test_resource_limits(two_switches):
    result = astar(
        two_switches,
        make_heuristic(two_switches, "hmax"),
        make_strategy(two_switches, "none"),
        Limits(max_expanded=1),
    )
    assert result.outcome == RESOURCE_LIMIT and result.limit_kind == "nodes"
    result = bfs(two_switches, make_strategy(two_switches, "none"), Limits(max_time=0.0))
    assert result.outcome == RESOURCE_LIMIT and result.limit_kind == "time"
    result = astar(
        two_switches,
        make_heuristic(two_switches, "hmax"),
        make_strategy(two_switches, "none"),
        Limits(max_open=1),
    )
    assert result.outcome == RESOURCE_LIMIT and result.limit_kind == "memory"


def test_counters_and_plan_validity():
    for task, _ in tasks_with_graphs(15):
        heuristic = make_heuristic(task, "hmax")
        for kind in ("none", "ec", "sp", "sac"):
            for engine in ("astar", "gbfs", "bfs"):
                strategy = make_strategy(task, kind)
                if engine == "bfs":
                    result = bfs(task, strategy)
                elif engine == "astar":
                    result = astar(task, heuristic, strategy)
                else:
                    result = gbfs(task, heuristic, strategy)
                assert result.expanded <= result.generated + 1
                if result.outcome == SOLVED:
                    plan = validate_plan(task, result.plan.steps)
                    assert plan.cost == result.plan.cost


def test_astar_optimal_against_oracle():
    for cost_mode in ("unit", "random"):
        for task, _ in tasks_with_graphs(20, cost_mode=cost_mode):
            optimum = brute_force_optimal_cost(task)
            heuristic = make_heuristic(task, "hmax")
            for kind in ("none", "ec", "sac"):
                result = astar(task, heuristic, make_strategy(task, kind))
                assert result.solved == (optimum is not None)
                if result.solved:
                    assert result.plan.cost == optimum, (kind, task)


def test_reduction_reduces_or_matches_expansions(two_switches, support_chain):
    for task in (two_switches, support_chain):
        baseline = bfs(task, make_strategy(task, "none")).expanded
        for kind in ("ec", "sac"):
            assert bfs(task, make_strategy(task, kind)).expanded <= baseline


def test_support_chain_counts(support_chain):
    # sac skips the irrelevant applicable action c, ec expands it
    for kind, expanded in [("none", 4), ("ec", 4), ("sac", 3)]:
        result = bfs(support_chain, make_strategy(support_chain, kind))
        assert result.outcome == SOLVED and result.expanded == expanded, kind


def test_reduction_linear_on_independent_switches(build):
    # n commuting toggles: the full space is 2^n, a stubborn strategy
    # expands one chain of n+1 states
    n = 10
    task = build(
        domains=[2] * n,
        actions=[(f"t{i}", [(i, 0)], [(i, 1)]) for i in range(n)],
        initial=[0] * n,
        goal=[(i, 1) for i in range(n)],
    )
    assert bfs(task, make_strategy(task, "none")).expanded == 2**n
    for kind in ("ec", "sac"):
        result = bfs(task, make_strategy(task, kind))
        assert result.expanded == n + 1
        assert result.plan.cost == n


def test_sp_closed_list_modes(two_switches):
    for mode in ("state", "state-level"):
        strategy = make_strategy(
            two_switches, "sp",
            StrategyConfig(sp_closed=mode, strat_tie_break="distinct"),
        )
        result = bfs(two_switches, strategy)
        assert result.outcome == SOLVED and result.plan.cost == 2
        assert result.expanded == 4


def test_sp_modes_agree_on_solvability():
    for task, _ in tasks_with_graphs(25):
        optimum = brute_force_optimal_cost(task)
        heuristic = make_heuristic(task, "hmax")
        for mode in ("state", "state-level"):
            strategy = make_strategy(task, "sp", StrategyConfig(sp_closed=mode))
            result = astar(task, heuristic, strategy)
            assert result.solved == (optimum is not None), mode
            if result.solved:
                validate_plan(task, result.plan.steps)
