"""SAS+ task model: variables, states, actions, plans.

States are dense value tuples indexed by variable position; equality and
hashing are plain tuple equality, which keeps the search hot path cheap.
Partial assignments are sorted (variable, value) pair tuples carrying the
conflict-freedom algebra everything else builds on. All types are
immutable after construction and safe to share across threads; the
operations below are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator


class InvalidTask(ValueError):
    """A task component violates a structural invariant."""


class NotApplicable(Exception):
    """An action was applied in a state where its precondition fails."""


class NotApplicableAt(NotApplicable):
    """A plan step is not applicable; carries the failing step index."""

    def __init__(self, step: int, action_id: int) -> None:
        super().__init__(f"plan step {step} (action {action_id}) is not applicable")
        self.step = step
        self.action_id = action_id


class GoalNotReached(Exception):
    """A plan executed to completion but its final state misses the goal."""


@dataclass(frozen=True)
class Variable:
    """A multi-valued state variable with a finite domain."""

    id: int
    name: str
    domain_size: int
    value_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.domain_size < 1:
            raise InvalidTask(f"variable {self.name!r}: domain must be non-empty")
        if not self.value_names:
            names = tuple(f"{self.name}={v}" for v in range(self.domain_size))
            object.__setattr__(self, "value_names", names)
        if len(self.value_names) != self.domain_size:
            raise InvalidTask(
                f"variable {self.name!r}: {len(self.value_names)} value names "
                f"for domain size {self.domain_size}"
            )


@dataclass(frozen=True)
class PartialAssignment:
    """A set of (variable, value) entries, at most one entry per variable."""

    entries: tuple[tuple[int, int], ...]
    pairs: frozenset[tuple[int, int]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_var: dict[int, int] = {}
        for var, val in self.entries:
            if by_var.get(var, val) != val:
                raise InvalidTask(
                    f"variable {var} assigned both {by_var[var]} and {val}"
                )
            by_var[var] = val
        object.__setattr__(self, "entries", tuple(sorted(by_var.items())))
        object.__setattr__(self, "pairs", frozenset(self.entries))

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]] = ()) -> PartialAssignment:
        return cls(tuple(pairs))

    def value_of(self, var: int) -> int | None:
        for v, val in self.entries:
            if v == var:
                return val
        return None

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.entries)

    def holds_in(self, state: State) -> bool:
        return all(state.values[v] == val for v, val in self.entries)

    def shares_entry_with(self, other: PartialAssignment) -> bool:
        """True when some identical (variable, value) entry appears in both."""
        return not self.pairs.isdisjoint(other.pairs)

    def conflicts_with(self, other: PartialAssignment) -> bool:
        """True when some variable receives different values in the two."""
        mine = dict(self.entries)
        return any(mine.get(v, val) != val for v, val in other.entries)

    def satisfied_in(self, state: State) -> bool:
        """True when at least one entry already holds in the state."""
        return any(state.values[v] == val for v, val in self.entries)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)


EMPTY_ASSIGNMENT = PartialAssignment(())


@dataclass(frozen=True)
class State:
    """A total assignment: position i holds the current value of variable i."""

    values: tuple[int, ...]

    def __getitem__(self, var: int) -> int:
        return self.values[var]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Action:
    """An action with precondition/effect partial assignments and a cost."""

    id: int
    name: str
    precondition: PartialAssignment
    effect: PartialAssignment
    cost: int = 1

    def __post_init__(self) -> None:
        if not self.effect:
            raise InvalidTask(f"action {self.name!r}: empty effect")
        if self.cost < 0:
            raise InvalidTask(f"action {self.name!r}: negative cost")


@dataclass(frozen=True)
class Plan:
    """A sequence of action ids with its summed cost."""

    steps: tuple[int, ...]
    cost: int


@dataclass(frozen=True)
class Task:
    """A full SAS+ instance.

    The optimization preference is fixed to summed action cost; with
    uses_metric off every action costs 1 and plan cost equals plan length.
    """

    variables: tuple[Variable, ...]
    actions: tuple[Action, ...]
    initial: State
    goal: PartialAssignment
    uses_metric: bool = False

    def __post_init__(self) -> None:
        n = len(self.variables)
        for i, var in enumerate(self.variables):
            if var.id != i:
                raise InvalidTask(f"variable {var.name!r} has id {var.id}, expected {i}")
        if len(self.initial.values) != n:
            raise InvalidTask("initial state length differs from variable count")
        self._check_value(self.initial.values, "initial state")
        self._check_assignment(self.goal, "goal")
        for i, action in enumerate(self.actions):
            if action.id != i:
                raise InvalidTask(f"action {action.name!r} has id {action.id}, expected {i}")
            self._check_assignment(action.precondition, f"precondition of {action.name!r}")
            self._check_assignment(action.effect, f"effect of {action.name!r}")
            if not self.uses_metric and action.cost != 1:
                raise InvalidTask(
                    f"action {action.name!r}: cost {action.cost} without a metric"
                )

    def _check_value(self, values: tuple[int, ...], where: str) -> None:
        for var, val in enumerate(values):
            if not 0 <= val < self.variables[var].domain_size:
                raise InvalidTask(f"{where}: value {val} out of domain of variable {var}")

    def _check_assignment(self, pa: PartialAssignment, where: str) -> None:
        for var, val in pa:
            if not 0 <= var < len(self.variables):
                raise InvalidTask(f"{where}: unknown variable {var}")
            if not 0 <= val < self.variables[var].domain_size:
                raise InvalidTask(f"{where}: value {val} out of domain of variable {var}")

    @property
    def num_variables(self) -> int:
        return len(self.variables)


def conflict_free(p: PartialAssignment, q: PartialAssignment) -> bool:
    """True iff no variable receives different values in p and q."""
    return not p.conflicts_with(q)


def applicable(state: State, action: Action) -> bool:
    """True iff every precondition entry of the action holds in the state."""
    return action.precondition.holds_in(state)


def apply_action(state: State, action: Action) -> State:
    """Apply the action; effect variables take their effect values.

    Raises NotApplicable when the precondition fails.
    """
    if not applicable(state, action):
        raise NotApplicable(f"action {action.name!r} is not applicable")
    values = list(state.values)
    for var, val in action.effect:
        values[var] = val
    return State(tuple(values))


def is_goal(task: Task, state: State) -> bool:
    """True iff every goal entry holds in the state."""
    return task.goal.holds_in(state)


def plan_cost(task: Task, steps: Iterable[int]) -> int:
    steps = tuple(steps)
    if task.uses_metric:
        return sum(task.actions[a].cost for a in steps)
    return len(steps)


def validate_plan(task: Task, steps: Iterable[int]) -> Plan:
    """Check stepwise applicability from the initial state and the goal.

    Raises NotApplicableAt(step) on the first inapplicable step and
    GoalNotReached when the final state is not a goal state.
    """
    steps = tuple(steps)
    state = task.initial
    for i, action_id in enumerate(steps):
        action = task.actions[action_id]
        if not applicable(state, action):
            raise NotApplicableAt(i, action_id)
        state = apply_action(state, action)
    if not is_goal(task, state):
        raise GoalNotReached(f"final state {state.values} misses the goal")
    return Plan(steps, plan_cost(task, steps))
