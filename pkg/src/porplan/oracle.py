"""Brute-force verification machinery for small instances.

Turns the reduction conditions into executable checks: exhaustive state
space enumeration, optimal costs by Dijkstra, the two stubborn-set
conditions, action preservation, the SP permutation property, and the
equivalence of the syntactic left-commutativity criterion with its
semantic both-orders reading. A seeded generator supplies small random
tasks whose goals are sampled from a random walk, so solvability is by
construction.

Applicability and application are re-implemented here on raw value
tuples, deliberately on a separate code path from the model module, so a
shared bug cannot vouch for itself. Checks are pure per task; distinct
seeds may run in parallel.
"""

from __future__ import annotations

import heapq
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .model import Action, PartialAssignment, State, Task, Variable
from .strategies import ExpansionContext, ExpansionStrategy, is_left_commutative

DEFAULT_MAX_STATES = 2000
_DFS_CAP = 2_000_000  # enumeration nodes before giving up


class TooLarge(Exception):
    """The instance exceeds the exhaustive-checking budget."""


# independent action table: (precondition pairs, effect pairs, cost)
Row = tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...], int]


def _rows(task: Task) -> list[Row]:
    return [(a.precondition.entries, a.effect.entries, a.cost) for a in task.actions]


def _applies(values: tuple[int, ...], pre: tuple[tuple[int, int], ...]) -> bool:
    return all(values[v] == x for v, x in pre)


def _result(values: tuple[int, ...], eff: tuple[tuple[int, int], ...]) -> tuple[int, ...]:
    out = list(values)
    for v, x in eff:
        out[v] = x
    return tuple(out)


def _walk(
    values: tuple[int, ...], rows: Sequence[Row], steps: Iterable[int]
) -> tuple[int, ...] | None:
    """End state of the sequence, or None when some step is inapplicable."""
    for a in steps:
        pre, eff, _ = rows[a]
        if not _applies(values, pre):
            return None
        values = _result(values, eff)
    return values


@dataclass
class StateSpaceGraph:
    """Exact reachable subgraph; edge (s, s', o) iff o applies and produces s'."""

    states: list[tuple[int, ...]]
    index: dict[tuple[int, ...], int]
    successors: list[list[tuple[int, int]]]  # per state: (action, successor index)
    edges: list[tuple[int, int, int]]  # (from, to, action)
    initial: int
    goal_states: frozenset[int]

    def can_reach_goal(self) -> frozenset[int]:
        """Indices of states from which some goal state is reachable."""
        preds: dict[int, list[int]] = {}
        for src, dst, _ in self.edges:
            preds.setdefault(dst, []).append(src)
        reached = set(self.goal_states)
        queue = list(reached)
        while queue:
            s = queue.pop()
            for p in preds.get(s, ()):
                if p not in reached:
                    reached.add(p)
                    queue.append(p)
        return frozenset(reached)


def enumerate_state_space(
    task: Task,
    max_states: int = DEFAULT_MAX_STATES,
    root: tuple[int, ...] | None = None,
) -> StateSpaceGraph:
    """BFS over all applicable actions from the root (default: initial)."""
    rows = _rows(task)
    goal = task.goal.entries
    start = task.initial.values if root is None else tuple(root)
    states = [start]
    index = {start: 0}
    successors: list[list[tuple[int, int]]] = []
    edges: list[tuple[int, int, int]] = []
    frontier = deque([0])
    while frontier:
        si = frontier.popleft()
        while len(successors) <= si:
            successors.append([])
        values = states[si]
        for a, (pre, eff, _) in enumerate(rows):
            if not _applies(values, pre):
                continue
            succ = _result(values, eff)
            ti = index.get(succ)
            if ti is None:
                if len(states) >= max_states:
                    raise TooLarge(f"more than {max_states} reachable states")
                ti = len(states)
                index[succ] = ti
                states.append(succ)
                frontier.append(ti)
            successors[si].append((a, ti))
            edges.append((si, ti, a))
    while len(successors) < len(states):
        successors.append([])
    goal_states = frozenset(
        i for i, values in enumerate(states) if _applies(values, goal)
    )
    return StateSpaceGraph(states, index, successors, edges, 0, goal_states)


def brute_force_optimal_cost(
    task: Task, max_states: int = DEFAULT_MAX_STATES
) -> int | None:
    """Dijkstra over the full reachable graph; None when unsolvable."""
    graph = enumerate_state_space(task, max_states)
    rows = _rows(task)
    dist = {graph.initial: 0}
    heap = [(0, graph.initial)]
    while heap:
        d, si = heapq.heappop(heap)
        if d > dist.get(si, d):
            continue
        if si in graph.goal_states:
            return d
        for a, ti in graph.successors[si]:
            nd = d + rows[a][2]
            if nd < dist.get(ti, nd + 1):
                dist[ti] = nd
                heapq.heappush(heap, (nd, ti))
    return None


@dataclass
class Violation:
    kind: str
    state: tuple[int, ...] | None
    witness: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, "state": self.state, **self.witness}


@dataclass
class Report:
    """Outcome of one checker run; empty violations means the check passed."""

    name: str
    checked: int = 0
    violations: list[Violation] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, state: tuple[int, ...] | None, **witness) -> None:
        self.violations.append(Violation(kind, state, witness))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "violations": [v.to_json() for v in self.violations],
            "notes": self.notes,
        }


def check_stubborn_conditions(
    task: Task,
    state: tuple[int, ...] | State,
    expansion: Iterable[int],
    horizon: int,
    graph: StateSpaceGraph | None = None,
    goal_reachable: set[tuple[int, ...]] | None = None,
    max_states: int = DEFAULT_MAX_STATES,
    max_witnesses: int = 5,
) -> Report:
    """Check A1 and A2 for one expansion set at one state.

    A2: no goal-reaching action sequence of length <= horizon avoids the
    set. A1: for every sequence of outside actions followed by a member b
    that extends to a goal (extendability judged exactly on the
    enumerated graph), fronting b is valid and lands in the same state.
    """
    values = state.values if isinstance(state, State) else tuple(state)
    rows = _rows(task)
    members = sorted(set(expansion))
    member_set = set(members)
    outside = [a for a in range(len(rows)) if a not in member_set]
    if goal_reachable is None:
        if graph is None:
            graph = enumerate_state_space(task, max_states, root=values)
        goal_reachable = {graph.states[i] for i in graph.can_reach_goal()}
    reach_goal = goal_reachable

    report = Report("stubborn_conditions")
    explored = 0
    stack: list[tuple[tuple[int, ...], tuple[int, ...]]] = [(values, ())]
    while stack:
        current, path = stack.pop()
        explored += 1
        if explored > _DFS_CAP:
            raise TooLarge("path enumeration exceeded the budget")
        if path and _applies(current, task.goal.entries):
            if len(report.violations) < max_witnesses:
                report.add("A2", values, path=list(path))
        if len(path) <= horizon - 1:
            for b in members:
                pre, eff, _ = rows[b]
                if not path or not _applies(current, pre):
                    continue
                tail_end = _result(current, eff)
                if tail_end not in reach_goal:
                    continue  # not a prefix of any goal path
                report.checked += 1
                fronted = _walk(values, rows, (b, *path))
                if fronted is None or fronted != tail_end:
                    if len(report.violations) < max_witnesses:
                        report.add(
                            "A1",
                            values,
                            member=b,
                            path=list(path),
                            fronted_end=fronted,
                            original_end=tail_end,
                        )
        if len(path) < horizon:
            for o in outside:
                pre, eff, _ = rows[o]
                if _applies(current, pre):
                    stack.append((_result(current, eff), path + (o,)))
    return report


def _reduced_expansion(
    task: Task, strategy: ExpansionStrategy, values: tuple[int, ...]
) -> tuple[int, ...]:
    """Strategy expansion on raw values; goal states are terminal."""
    if _applies(values, task.goal.entries):
        return ()
    return strategy.expansion(ExpansionContext(State(values), None))


def check_action_preserving(
    task: Task,
    strategy: ExpansionStrategy,
    horizon: int,
    max_states: int = DEFAULT_MAX_STATES,
    max_witnesses: int = 5,
    strict: bool = False,
) -> Report:
    """Every full-graph solution has a same-multiset permutation that is a
    path of the reduced graph reaching the same final state.

    Solution sequences start at a non-goal state and stop at the first
    goal state reached; the reduced graph is terminal at goal states.
    Because goals are terminal, a permutation may hit a goal before
    consuming the whole multiset (front-swapping can promote the
    goal-reaching suffix); by default such a truncated witness, a reduced
    solution over a sub-multiset, is accepted. strict=True demands the
    exact multiset and final state.
    """
    rows = _rows(task)
    goal = task.goal.entries
    initial = task.initial.values
    report = Report("action_preserving")
    if _applies(initial, goal):
        return report  # no solution sequences from a goal state

    # collect minimal solution (multiset, end) pairs, deduplicating subtrees
    targets: dict[tuple[tuple[int, ...], tuple[int, ...]], tuple[int, ...]] = {}
    seen: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    stack = [(initial, ())]
    while stack:
        values, multiset = stack.pop()
        if len(seen) > _DFS_CAP:
            raise TooLarge("solution enumeration exceeded the budget")
        if multiset and _applies(values, goal):
            targets.setdefault((multiset, values), multiset)
            continue
        if len(multiset) < horizon:
            for a, (pre, eff, _) in enumerate(rows):
                if _applies(values, pre):
                    key = (_result(values, eff), tuple(sorted(multiset + (a,))))
                    if key not in seen:
                        seen.add(key)
                        stack.append((key[0], key[1]))
    expansions: dict[tuple[int, ...], tuple[int, ...]] = {}

    def reduced_moves(values: tuple[int, ...]) -> tuple[int, ...]:
        if values not in expansions:
            expansions[values] = _reduced_expansion(task, strategy, values)
        return expansions[values]

    for (multiset, end), _ in targets.items():
        report.checked += 1
        memo: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
        found = False
        frames = [(initial, multiset)]
        while frames and not found:
            values, remaining = frames.pop()
            if _applies(values, goal):  # terminal in the reduced graph
                found = (not remaining and values == end) if strict else True
                continue
            if not remaining or (values, remaining) in memo:
                continue
            memo.add((values, remaining))
            moves = set(reduced_moves(values))
            for i, a in enumerate(remaining):
                if i > 0 and remaining[i - 1] == a:
                    continue
                if a not in moves:
                    continue
                pre, eff, _ = rows[a]
                if _applies(values, pre):
                    frames.append(
                        (_result(values, eff), remaining[:i] + remaining[i + 1 :])
                    )
        if not found and len(report.violations) < max_witnesses:
            report.add("action_preserving", initial, multiset=list(multiset), end=end)
    return report


def _follow_up_matrix(task: Task) -> list[list[bool]]:
    n = len(task.actions)
    out = [[False] * n for _ in range(n)]
    for a in task.actions:
        for b in task.actions:
            out[a.id][b.id] = a.effect.shares_entry_with(
                b.precondition
            ) or a.effect.shares_entry_with(b.effect)
    return out


def check_sp_permutation(
    task: Task,
    horizon: int,
    tie_break: str = "canonical",
    max_witnesses: int = 5,
) -> Report:
    """Every valid path from the initial state has an SP-path permutation
    to the same state (consecutive pairs survive the level filter)."""
    from .graphs import stratify

    strat = stratify(task, tie_break=tie_break)
    level = strat.action_level
    follow = _follow_up_matrix(task)
    rows = _rows(task)
    initial = task.initial.values

    def allowed(prev: int | None, b: int) -> bool:
        return prev is None or level[b] >= level[prev] or follow[prev][b]

    # all reachable (multiset, end) pairs within the horizon
    seen: set[tuple[tuple[int, ...], tuple[int, ...]]] = {(initial, ())}
    stack = [(initial, ())]
    while stack:
        values, multiset = stack.pop()
        if len(seen) > _DFS_CAP:
            raise TooLarge("path enumeration exceeded the budget")
        if len(multiset) < horizon:
            for a, (pre, eff, _) in enumerate(rows):
                if _applies(values, pre):
                    key = (_result(values, eff), tuple(sorted(multiset + (a,))))
                    if key not in seen:
                        seen.add(key)
                        stack.append(key)

    report = Report("sp_permutation")
    for end, multiset in sorted(seen):
        if not multiset:
            continue
        report.checked += 1
        memo: set[tuple[tuple[int, ...], tuple[int, ...], int | None]] = set()
        frames: list[tuple[tuple[int, ...], tuple[int, ...], int | None]] = [
            (initial, multiset, None)
        ]
        found = False
        while frames and not found:
            values, remaining, last = frames.pop()
            if not remaining:
                found = values == end
                continue
            state_key = (values, remaining, last)
            if state_key in memo:
                continue
            memo.add(state_key)
            for i, a in enumerate(remaining):
                if i > 0 and remaining[i - 1] == a:
                    continue
                if not allowed(last, a):
                    continue
                pre, eff, _ = rows[a]
                if _applies(values, pre):
                    frames.append(
                        (_result(values, eff), remaining[:i] + remaining[i + 1 :], a)
                    )
        if not found and len(report.violations) < max_witnesses:
            report.add("sp_permutation", initial, multiset=list(multiset), end=end)
    return report


def sp_reachable_values(
    task: Task, tie_break: str = "canonical", max_states: int = DEFAULT_MAX_STATES
) -> frozenset[tuple[int, ...]]:
    """States reachable via SP-paths, explored exactly over
    (state, last action) pairs; closed-list policy plays no role here."""
    from .graphs import stratify

    strat = stratify(task, tie_break=tie_break)
    level = strat.action_level
    follow = _follow_up_matrix(task)
    rows = _rows(task)
    initial = task.initial.values
    seen_pairs: set[tuple[tuple[int, ...], int | None]] = {(initial, None)}
    values_seen: set[tuple[int, ...]] = {initial}
    queue: deque[tuple[tuple[int, ...], int | None]] = deque([(initial, None)])
    while queue:
        values, last = queue.popleft()
        for a, (pre, eff, _) in enumerate(rows):
            if last is not None and level[a] < level[last] and not follow[last][a]:
                continue
            if not _applies(values, pre):
                continue
            succ = _result(values, eff)
            pair = (succ, a)
            if pair not in seen_pairs:
                if len(values_seen) > max_states:
                    raise TooLarge(f"more than {max_states} reachable states")
                seen_pairs.add(pair)
                values_seen.add(succ)
                queue.append(pair)
    return frozenset(values_seen)


def check_left_commutativity_equivalence(
    task: Task,
    samples: int,
    seed: int,
    max_witnesses: int = 5,
) -> Report:
    """Sample valid (a, b) pairs and compare the syntactic criterion with
    the semantic both-orders check."""
    rng = random.Random(seed)
    rows = _rows(task)
    goal_free_pool: list[tuple[int, ...]] = [task.initial.values]
    pool_set = {task.initial.values}
    for _ in range(50):
        values = task.initial.values
        for _ in range(8):
            moves = [a for a, (pre, _, _) in enumerate(rows) if _applies(values, pre)]
            if not moves:
                break
            _, eff, _ = rows[rng.choice(moves)]
            values = _result(values, eff)
            if values not in pool_set:
                pool_set.add(values)
                goal_free_pool.append(values)

    report = Report("left_commutativity_equivalence")
    attempts = 0
    while report.checked < samples and attempts < samples * 20:
        attempts += 1
        values = rng.choice(goal_free_pool)
        first_moves = [a for a, (pre, _, _) in enumerate(rows) if _applies(values, pre)]
        if not first_moves:
            continue
        a = rng.choice(first_moves)
        mid = _result(values, rows[a][1])
        second_moves = [b for b, (pre, _, _) in enumerate(rows) if _applies(mid, pre)]
        if not second_moves:
            continue
        b = rng.choice(second_moves)

        syntactic = is_left_commutative(task, State(values), a, b)
        end_ab = _result(mid, rows[b][1])
        semantic = False
        if _applies(values, rows[b][0]):
            swapped_mid = _result(values, rows[b][1])
            if _applies(swapped_mid, rows[a][0]):
                semantic = _result(swapped_mid, rows[a][1]) == end_ab
        report.checked += 1
        if syntactic != semantic:
            if len(report.violations) < max_witnesses:
                report.add(
                    "commutativity_mismatch",
                    values,
                    pair=[a, b],
                    syntactic=syntactic,
                    semantic=semantic,
                )
    return report


def check_action_core_lemma(
    task: Task, horizon: int, max_witnesses: int = 5
) -> Report:
    """Every valid path from the initial state ending in an action that is
    inapplicable there contains a distinct member of that action's core."""
    from .graphs import action_core

    rows = _rows(task)
    initial = task.initial.values
    inapplicable = {
        a for a, (pre, _, _) in enumerate(rows) if not _applies(initial, pre)
    }
    cores = {
        a: action_core(task, State(initial), {a}) - {a} for a in inapplicable
    }
    report = Report("action_core_lemma")
    stack: list[tuple[tuple[int, ...], tuple[int, ...]]] = [(initial, ())]
    explored = 0
    while stack:
        values, path = stack.pop()
        explored += 1
        if explored > _DFS_CAP:
            raise TooLarge("path enumeration exceeded the budget")
        if path and path[-1] in inapplicable:
            report.checked += 1
            if not cores[path[-1]].intersection(path):
                if len(report.violations) < max_witnesses:
                    report.add("action_core_lemma", initial, path=list(path))
        if len(path) < horizon:
            for a, (pre, eff, _) in enumerate(rows):
                if _applies(values, pre):
                    stack.append((_result(values, eff), path + (a,)))
    return report


# ---------------------------------------------------------------------------
# seeded task streams and aggregate suites (shared by the CLI and the
# acceptance tests)


def default_task_stream(
    count: int,
    start: int = 0,
    cost_mode: str = "unit",
    goal_mode: str = "walk",
    max_states: int = DEFAULT_MAX_STATES,
    max_variables: int = 6,
    max_actions: int = 10,
) -> list[tuple[int, Task, StateSpaceGraph]]:
    """First `count` seeds from `start` whose task fits the state cap.

    Sizes vary deterministically with the seed within the generator
    bounds. Walk-mode goals make every returned task solvable.
    """
    out: list[tuple[int, Task, StateSpaceGraph]] = []
    seed = start
    while len(out) < count:
        spec = RandomTaskSpec(
            seed=seed,
            num_variables=3 + seed % (max_variables - 2),
            max_domain=2 + seed % 2,
            num_actions=5 + seed % (max_actions - 4),
            goal_size=1 + seed % 2,
            cost_mode=cost_mode,
            goal_mode=goal_mode,
        )
        seed += 1
        task = generate_random_task(spec)
        try:
            graph = enumerate_state_space(task, max_states)
        except TooLarge:
            continue
        out.append((spec.seed, task, graph))
    return out


def reduced_reachable_values(
    task: Task, strategy: ExpansionStrategy, max_states: int = DEFAULT_MAX_STATES
) -> list[tuple[int, ...]]:
    """States a strategy-driven exhaustive BFS expands (goals terminal)."""
    rows = _rows(task)
    initial = task.initial.values
    seen = {initial}
    order = [initial]
    queue = deque([initial])
    while queue:
        values = queue.popleft()
        for a in _reduced_expansion(task, strategy, values):
            succ = _result(values, rows[a][1])
            if succ not in seen:
                if len(seen) >= max_states:
                    raise TooLarge(f"more than {max_states} reachable states")
                seen.add(succ)
                order.append(succ)
                queue.append(succ)
    return order


def suite_stubborn(
    tasks: Sequence[tuple[int, Task, StateSpaceGraph]],
    kinds: Sequence[str] = ("sac", "ec"),
    horizon: int = 6,
    strategy_factory=None,
) -> Report:
    """A1/A2 at every state an exhaustive reduced BFS expands."""
    from .strategies import make_strategy

    factory = strategy_factory or make_strategy
    report = Report("stubborn_suite")
    for seed, task, graph in tasks:
        goal_reachable = {graph.states[i] for i in graph.can_reach_goal()}
        for kind in kinds:
            strategy = factory(task, kind)
            for values in reduced_reachable_values(task, strategy):
                if _applies(values, task.goal.entries):
                    continue
                expansion = _reduced_expansion(task, strategy, values)
                sub = check_stubborn_conditions(
                    task, values, expansion, horizon, goal_reachable=goal_reachable
                )
                report.checked += sub.checked + 1
                for v in sub.violations:
                    v.witness.update(seed=seed, strategy=kind)
                    report.violations.append(v)
    return report


def suite_optimality(
    tasks: Sequence[tuple[int, Task, StateSpaceGraph]],
    sp_closed: str = "state",
    strategy_factory=None,
) -> Report:
    """A*+hmax cost equality under ec/sac and solvability agreement under
    all four strategies, against the Dijkstra oracle."""
    from .heuristics import make_heuristic
    from .search import astar
    from .strategies import StrategyConfig, make_strategy

    factory = strategy_factory or make_strategy
    report = Report("optimality_suite")
    for seed, task, graph in tasks:
        optimum = brute_force_optimal_cost(task)
        heuristic = make_heuristic(task, "hmax")
        for kind in ("none", "ec", "sp", "sac"):
            config = StrategyConfig(sp_closed=sp_closed)
            result = astar(task, heuristic, factory(task, kind, config))
            report.checked += 1
            if result.solved != (optimum is not None):
                report.add(
                    "solvability",
                    task.initial.values,
                    seed=seed,
                    kind=kind,
                    oracle=optimum,
                    outcome=result.outcome,
                )
            elif result.solved and kind in ("none", "ec", "sac"):
                assert result.plan is not None
                if result.plan.cost != optimum:
                    report.add(
                        "optimality",
                        task.initial.values,
                        seed=seed,
                        kind=kind,
                        oracle=optimum,
                        cost=result.plan.cost,
                    )
    return report


def suite_sp(
    tasks: Sequence[tuple[int, Task, StateSpaceGraph]],
    horizon: int = 5,
    tie_break: str = "canonical",
) -> Report:
    """Permutation property plus reachable-set equality for SP."""
    report = Report("sp_suite")
    for seed, task, graph in tasks:
        sub = check_sp_permutation(task, horizon, tie_break)
        report.checked += sub.checked
        for v in sub.violations:
            v.witness.update(seed=seed)
            report.violations.append(v)
        reachable = sp_reachable_values(task, tie_break)
        full = frozenset(graph.states)
        report.checked += 1
        if reachable != full:
            report.add(
                "sp_reachability",
                task.initial.values,
                seed=seed,
                missing=sorted(full - reachable)[:5],
                extra=sorted(reachable - full)[:5],
            )
    return report


def suite_lemma(
    tasks: Sequence[tuple[int, Task, StateSpaceGraph]], horizon: int = 5
) -> Report:
    report = Report("action_core_lemma_suite")
    for seed, task, _ in tasks:
        sub = check_action_core_lemma(task, horizon)
        report.checked += sub.checked
        for v in sub.violations:
            v.witness.update(seed=seed)
            report.violations.append(v)
    return report


def suite_commutativity(
    tasks: Sequence[tuple[int, Task, StateSpaceGraph]],
    samples_per_task: int = 10,
    seed: int = 0,
) -> Report:
    report = Report("commutativity_suite")
    for task_seed, task, _ in tasks:
        sub = check_left_commutativity_equivalence(task, samples_per_task, seed)
        report.checked += sub.checked
        for v in sub.violations:
            v.witness.update(seed=task_seed)
            report.violations.append(v)
    return report


def suite_action_preserving(
    tasks: Sequence[tuple[int, Task, StateSpaceGraph]],
    kinds: Sequence[str] = ("sac", "ec"),
    horizon: int = 4,
) -> Report:
    from .strategies import make_strategy

    report = Report("action_preserving_suite")
    for seed, task, _ in tasks:
        for kind in kinds:
            sub = check_action_preserving(task, make_strategy(task, kind), horizon)
            report.checked += sub.checked
            for v in sub.violations:
                v.witness.update(seed=seed, strategy=kind)
                report.violations.append(v)
    return report


@dataclass(frozen=True)
class RandomTaskSpec:
    """Deterministic small-task generator parameters."""

    seed: int
    num_variables: int = 4
    max_domain: int = 3
    num_actions: int = 8
    goal_size: int = 2
    cost_mode: str = "unit"  # or "random"
    goal_mode: str = "walk"  # or "random"

    def __post_init__(self) -> None:
        if not 1 <= self.num_variables <= 6:
            raise ValueError("variable count must be in 1..6")
        if not 2 <= self.max_domain <= 3:
            raise ValueError("domain sizes must be in 2..3")
        if not 1 <= self.num_actions <= 12:
            raise ValueError("action count must be in 1..12")
        if self.goal_size < 1:
            raise ValueError("goal size must be positive")
        if self.cost_mode not in ("unit", "random"):
            raise ValueError(f"unknown cost mode {self.cost_mode!r}")
        if self.goal_mode not in ("walk", "random"):
            raise ValueError(f"unknown goal mode {self.goal_mode!r}")


def generate_random_task(spec: RandomTaskSpec) -> Task:
    """Deterministic per seed; walk-mode goals are reachable by construction."""
    rng = random.Random(spec.seed)
    n = spec.num_variables
    domains = [rng.randint(2, spec.max_domain) for _ in range(n)]
    variables = tuple(Variable(i, f"var{i}", domains[i]) for i in range(n))

    actions = []
    for k in range(spec.num_actions):
        eff_vars = sorted(rng.sample(range(n), rng.randint(1, min(2, n))))
        effect = tuple((v, rng.randrange(domains[v])) for v in eff_vars)
        pre_vars = sorted(rng.sample(range(n), rng.randint(0, min(2, n))))
        precondition = tuple((v, rng.randrange(domains[v])) for v in pre_vars)
        cost = 1 if spec.cost_mode == "unit" else rng.randint(0, 3)
        actions.append(
            Action(
                id=k,
                name=f"op{k}",
                precondition=PartialAssignment.of(precondition),
                effect=PartialAssignment.of(effect),
                cost=cost,
            )
        )

    initial = tuple(rng.randrange(d) for d in domains)
    goal_size = min(spec.goal_size, n)
    if spec.goal_mode == "walk":
        rows = [(a.precondition.entries, a.effect.entries, a.cost) for a in actions]
        values = initial
        for _ in range(rng.randint(1, n + 2)):
            moves = [a for a, (pre, _, _) in enumerate(rows) if _applies(values, pre)]
            if not moves:
                break
            values = _result(values, rows[rng.choice(moves)][1])
        goal_vars = sorted(rng.sample(range(n), goal_size))
        goal = tuple((v, values[v]) for v in goal_vars)
    else:
        goal_vars = sorted(rng.sample(range(n), goal_size))
        goal = tuple((v, rng.randrange(domains[v])) for v in goal_vars)

    return Task(
        variables=variables,
        actions=tuple(actions),
        initial=State(initial),
        goal=PartialAssignment.of(goal),
        uses_metric=spec.cost_mode == "random",
    )
