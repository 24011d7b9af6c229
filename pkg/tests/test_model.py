from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from porplan import (
    Action,
    GoalNotReached,
    InvalidTask,
    NotApplicable,
    NotApplicableAt,
    PartialAssignment,
    State,
    Task,
    Variable,
    applicable,
    apply_action,
    conflict_free,
    is_goal,
    validate_plan,
)

PA = PartialAssignment.of


def test_conflict_free_basics():
    assert conflict_free(PA([(0, 1)]), PA([(1, 1)]))  # disjoint variables
    assert not conflict_free(PA([(0, 1)]), PA([(0, 0)]))
    assert conflict_free(PA(), PA([(0, 0), (1, 1)]))
    assert conflict_free(PA([(0, 1)]), PA([(0, 1)]))  # same value is fine


assignments = st.lists(
    st.tuples(st.integers(0, 3), st.integers(0, 2)), max_size=4
).map(lambda pairs: PA(dict(pairs).items()))


@given(assignments, assignments)
def test_conflict_free_symmetric(p, q):
    assert conflict_free(p, q) == conflict_free(q, p)


@given(assignments)
def test_conflict_free_reflexive(p):
    assert conflict_free(p, p)


def test_applicable(two_switches, enable_chain):
    a, b = two_switches.actions
    assert applicable(two_switches.initial, a)
    assert applicable(two_switches.initial, b)
    assert not applicable(State((1, 0)), a)
    # b needs x2=1 and x3=2; at (0,0,2) the x2 entry fails
    assert not applicable(State((0, 0, 2)), enable_chain.actions[1])
    empty_pre = Action(0, "free", PA(), PA([(0, 1)]))
    assert applicable(State((0, 0)), empty_pre)
    assert applicable(State((1, 1)), empty_pre)


def test_apply(two_switches):
    a, b = two_switches.actions
    s1 = apply_action(two_switches.initial, a)
    assert s1 == State((1, 0))
    assert apply_action(s1, b) == State((1, 1))
    with pytest.raises(NotApplicable):
        apply_action(s1, a)


def test_is_goal(two_switches):
    assert is_goal(two_switches, State((1, 1)))
    assert not is_goal(two_switches, two_switches.initial)
    no_goal = Task(
        two_switches.variables, two_switches.actions, two_switches.initial, PA()
    )
    assert is_goal(no_goal, State((0, 0)))
    assert is_goal(no_goal, State((1, 0)))


def test_validate_plan(two_switches):
    assert validate_plan(two_switches, [0, 1]).cost == 2
    assert validate_plan(two_switches, [1, 0]).cost == 2
    with pytest.raises(NotApplicableAt) as err:
        validate_plan(two_switches, [0, 0])
    assert err.value.step == 1
    with pytest.raises(GoalNotReached):
        validate_plan(two_switches, [0])


def test_plan_cost_uses_metric(build):
    task = build(
        domains=[2],
        actions=[("pricey", [(0, 0)], [(0, 1)], 5)],
        initial=[0],
        goal=[(0, 1)],
        uses_metric=True,
    )
    assert validate_plan(task, [0]).cost == 5


states = st.tuples(*(st.integers(0, 2) for _ in range(4))).map(State)


@given(states, assignments, assignments.filter(bool))
def test_apply_changes_exactly_effect_variables(state, pre, eff):
    action = Action(0, "o", pre, eff)
    if not applicable(state, action):
        return
    after = apply_action(state, action)
    changed = {v for v in range(len(state)) if after[v] != state[v]}
    assert changed <= set(eff.variables)
    assert eff.holds_in(after)


def test_partial_assignment_rejects_conflicting_duplicates():
    with pytest.raises(InvalidTask):
        PA([(0, 1), (0, 2)])
    assert PA([(0, 1), (0, 1)]).entries == ((0, 1),)


def test_task_validation():
    v = (Variable(0, "x", 2),)
    act = Action(0, "o", PA([(0, 0)]), PA([(0, 1)]))
    with pytest.raises(InvalidTask):  # initial value out of domain
        Task(v, (act,), State((2,)), PA())
    with pytest.raises(InvalidTask):  # goal variable unknown
        Task(v, (act,), State((0,)), PA([(3, 0)]))
    with pytest.raises(InvalidTask):  # non-unit cost without a metric
        Task(v, (Action(0, "o", PA(), PA([(0, 1)]), cost=2),), State((0,)), PA())
    with pytest.raises(InvalidTask):  # action ids must be positional
        Task(v, (Action(1, "o", PA(), PA([(0, 1)])),), State((0,)), PA())
    with pytest.raises(InvalidTask):  # empty effect
        Action(0, "o", PA(), PA())


def test_variable_value_names_default_and_check():
    assert Variable(0, "x", 2).value_names == ("x=0", "x=1")
    with pytest.raises(InvalidTask):
        Variable(0, "x", 2, ("only-one",))
