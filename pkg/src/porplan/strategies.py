"""Per-state expansion-set generators: full, EC, SP filtering, SAC.

Each strategy answers one question at a state s: which applicable actions
may the search apply. "none" returns all of them. EC keeps the actions of
a dependency-closed DTG prefix of the potential dependency graph. SAC
closes a landmark action set under ASG support and conflict rules and
keeps the applicable members. SP is a filter over the full set driven by
causal-graph levels and the action that generated the node.

Strategy objects are immutable after construction (they hold precomputed
DTGs or the stratification); per-call state is caller-owned, so one
strategy may serve concurrent searches over the same task.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .graphs import (
    DTG,
    Stratification,
    build_all_dtgs,
    build_pdg,
    closure_prefix_order,
    stratify,
)
from .model import State, Task, applicable, apply_action, conflict_free, is_goal

KINDS = ("none", "ec", "sp", "sac")


class NoUnachievedGoal(Exception):
    """Expansion was requested at a state that already satisfies the goal."""


class InvalidPath(Exception):
    """The ordered action pair is not applicable in sequence at the state."""


@dataclass(frozen=True)
class StrategyConfig:
    landmark_choice: str = "fewest-actions"
    sp_closed: str = "state"  # or "state-level"
    strat_tie_break: str = "canonical"  # or "distinct"

    def __post_init__(self) -> None:
        if self.landmark_choice != "fewest-actions":
            raise ValueError(f"unknown landmark choice {self.landmark_choice!r}")
        if self.sp_closed not in ("state", "state-level"):
            raise ValueError(f"unknown closed-list mode {self.sp_closed!r}")
        if self.strat_tie_break not in ("canonical", "distinct"):
            raise ValueError(f"unknown stratification tie break {self.strat_tie_break!r}")


class ExpansionContext(NamedTuple):
    """A node the search is about to expand.

    generating_action is the action that produced the node; None exactly
    at the search root.
    """

    state: State
    generating_action: int | None = None


def full_expansion(task: Task, state: State) -> tuple[int, ...]:
    """All applicable action ids, ascending."""
    return tuple(a.id for a in task.actions if applicable(state, a))


def _unachieved_goal_variables(task: Task, state: State) -> list[int]:
    return [v for v, g in task.goal if state[v] != g]


def landmark_action_set(
    task: Task,
    state: State,
    dtgs: Sequence[DTG] | None = None,
    choice: str = "fewest-actions",
) -> frozenset[int]:
    """Actions of which every solution from the state must use at least one.

    Picks one unachieved goal-related DTG and returns the actions on its
    transitions leaving the current value, V0-source transitions included
    (an action without an own-variable precondition can be the first
    mover). The DTG with the fewest such actions wins, ties to the lowest
    variable id.
    """
    if choice != "fewest-actions":
        raise ValueError(f"unknown landmark choice {choice!r}")
    unachieved = _unachieved_goal_variables(task, state)
    if not unachieved:
        raise NoUnachievedGoal("state satisfies the goal")
    if dtgs is None:
        dtgs = build_all_dtgs(task)
    best: frozenset[int] | None = None
    best_key: tuple[int, int] | None = None
    for var in unachieved:
        actions: set[int] = set()
        for e in dtgs[var].edges_leaving(state[var]):
            actions.update(e.actions)
        key = (len(actions), var)
        if best_key is None or key < best_key:
            best, best_key = frozenset(actions), key
    assert best is not None
    return best


def _achiever_index(task: Task) -> dict[tuple[int, int], list[int]]:
    index: dict[tuple[int, int], list[int]] = defaultdict(list)
    for action in task.actions:
        for fact in action.effect:
            index[fact].append(action.id)
    return index


class ActionRelations:
    """State-independent pairwise action analysis, built once per task.

    supporters[fact] lists the achievers of a precondition entry (the ASG
    edge targets of an action needing it); pre_conflicts[a] lists actions
    whose precondition clashes with eff(a), eff_conflicts[a] those whose
    effect does. Quadratic once, then every per-state closure only walks
    these lists.
    """

    def __init__(self, task: Task) -> None:
        self.supporters = _achiever_index(task)
        n = len(task.actions)
        self.pre_conflicts: list[list[int]] = [[] for _ in range(n)]
        self.eff_conflicts: list[list[int]] = [[] for _ in range(n)]
        for a in task.actions:
            for b in task.actions:
                if b.id == a.id:
                    continue
                if b.precondition.conflicts_with(a.effect):
                    self.pre_conflicts[a.id].append(b.id)
                if b.effect.conflicts_with(a.effect):
                    self.eff_conflicts[a.id].append(b.id)


def sac_fixpoint(
    task: Task,
    state: State,
    seed: Iterable[int],
    relations: ActionRelations | None = None,
) -> frozenset[int]:
    """Joint support/conflict closure of a seed action set.

    Interleaves two rules until stable: an inapplicable member pulls in
    every action supplying one of its precondition entries (ASG support
    closure), and an applicable member a pulls in every outside b whose
    effect conflicts with eff(a), or whose precondition both conflicts
    with eff(a) and has an entry holding in the state (conflict closure).
    """
    if relations is None:
        relations = ActionRelations(task)
    members = set(seed)
    changed = True
    while changed:
        changed = False
        for a_id in sorted(members):
            a = task.actions[a_id]
            if applicable(state, a):
                for b_id in relations.eff_conflicts[a_id]:
                    if b_id not in members:
                        members.add(b_id)
                        changed = True
                for b_id in relations.pre_conflicts[a_id]:
                    if b_id not in members and task.actions[
                        b_id
                    ].precondition.satisfied_in(state):
                        members.add(b_id)
                        changed = True
            else:
                for fact in a.precondition:
                    for b_id in relations.supporters.get(fact, ()):
                        if b_id not in members:
                            members.add(b_id)
                            changed = True
    return frozenset(members)


def sac_expansion(
    task: Task,
    state: State,
    dtgs: Sequence[DTG] | None = None,
    relations: ActionRelations | None = None,
) -> frozenset[int]:
    """Applicable members of the joint closure of a landmark action set."""
    landmarks = landmark_action_set(task, state, dtgs)
    if not landmarks:
        return frozenset()
    members = sac_fixpoint(task, state, landmarks, relations)
    return frozenset(
        a_id for a_id in members if applicable(state, task.actions[a_id])
    )


def ec_expansion(
    task: Task,
    state: State,
    dtgs: Sequence[DTG] | None = None,
    cache: dict | None = None,
) -> frozenset[int]:
    """Applicable actions of a minimal dependency-closed DTG prefix.

    SCCs of PDG(s) are ordered sinks-first (every prefix then is a
    dependency closure); the prefix stops at the first component holding
    an unachieved goal-related DTG.
    """
    unachieved = set(_unachieved_goal_variables(task, state))
    if not unachieved:
        raise NoUnachievedGoal("state satisfies the goal")
    if dtgs is None:
        dtgs = build_all_dtgs(task)
    pdg = build_pdg(task, state, dtgs, cache)
    prefix: set[int] = set()
    for component in closure_prefix_order(task.num_variables, pdg.edges):
        prefix.update(component)
        if unachieved.intersection(component):
            break
    return frozenset(
        a.id
        for a in task.actions
        if applicable(state, a) and not prefix.isdisjoint(a.effect.variables)
    )


def is_follow_up(task: Task, first: int, second: int) -> bool:
    """True when eff(first) shares an entry with pre(second) or eff(second)."""
    a, b = task.actions[first], task.actions[second]
    return a.effect.shares_entry_with(b.precondition) or a.effect.shares_entry_with(
        b.effect
    )


def sp_filter(
    task: Task,
    stratification: Stratification,
    ctx: ExpansionContext,
    applicable_ids: Sequence[int],
) -> tuple[int, ...]:
    """Drop lower-level non-follow-up actions after the generating action.

    At the root every applicable action is kept.
    """
    gen = ctx.generating_action
    if gen is None:
        return tuple(applicable_ids)
    level = stratification.action_level
    return tuple(
        b
        for b in applicable_ids
        if level[b] >= level[gen] or is_follow_up(task, gen, b)
    )


def is_left_commutative(task: Task, state: State, first: int, second: int) -> bool:
    """Decide whether the pair may be swapped in front at the state.

    Requires (first, second) to be a valid path at the state; raises
    InvalidPath otherwise. True iff pre/eff of the two are pairwise
    conflict-free and second is applicable at the state directly, which
    is exactly "both orders are valid and reach the same state".
    """
    a, b = task.actions[first], task.actions[second]
    if not applicable(state, a):
        raise InvalidPath(f"{a.name!r} is not applicable")
    if not applicable(apply_action(state, a), b):
        raise InvalidPath(f"{b.name!r} is not applicable after {a.name!r}")
    return (
        conflict_free(a.precondition, b.effect)
        and conflict_free(b.precondition, a.effect)
        and conflict_free(a.effect, b.effect)
        and applicable(state, b)
    )


class ExpansionStrategy:
    """A per-state expansion-set generator bound to one task.

    kind is one of "none", "ec", "sp", "sac". Use make_strategy.
    """

    def __init__(self, task: Task, kind: str, config: StrategyConfig | None = None):
        if kind not in KINDS:
            raise ValueError(f"unknown strategy kind {kind!r}")
        self.task = task
        self.kind = kind
        self.config = config or StrategyConfig()
        self.dtgs: tuple[DTG, ...] | None = None
        self.stratification: Stratification | None = None
        self._relations: ActionRelations | None = None
        self._desc_cache: dict | None = None
        if kind in ("ec", "sac"):
            self.dtgs = build_all_dtgs(task)
        if kind == "sac":
            self._relations = ActionRelations(task)
        if kind == "ec":
            self._desc_cache = {}
        if kind == "sp":
            self.stratification = stratify(task, tie_break=self.config.strat_tie_break)

    def expansion(self, ctx: ExpansionContext) -> tuple[int, ...]:
        """Action ids to apply at the node, ascending. Not defined on
        goal states; the search tests the goal before expanding."""
        state = ctx.state
        if self.kind == "none":
            return full_expansion(self.task, state)
        if self.kind == "sp":
            assert self.stratification is not None
            return sp_filter(
                self.task, self.stratification, ctx, full_expansion(self.task, state)
            )
        if is_goal(self.task, state):
            raise NoUnachievedGoal("state satisfies the goal")
        if self.kind == "ec":
            chosen = ec_expansion(self.task, state, self.dtgs, self._desc_cache)
        else:
            chosen = sac_expansion(self.task, state, self.dtgs, self._relations)
        return tuple(sorted(chosen))

    def node_key(self, state: State, generating_action: int | None):
        """Duplicate-detection key; SP optionally folds in the level of
        the generating action."""
        if self.kind == "sp" and self.config.sp_closed == "state-level":
            assert self.stratification is not None
            level = (
                0
                if generating_action is None
                else self.stratification.action_level[generating_action]
            )
            return (state.values, level)
        return state.values


def make_strategy(
    task: Task, kind: str, config: StrategyConfig | None = None
) -> ExpansionStrategy:
    return ExpansionStrategy(task, kind, config)
