"""SAS+ forward state-space planner with partial-order reduction.

Expansion strategies prune which applicable actions a search applies at
each state without giving up completeness (and, for the stubborn-set
strategies, optimality). The oracle module re-derives everything by brute
force on small instances so the reduction conditions are testable.
"""

from .model import (
    Action,
    GoalNotReached,
    InvalidTask,
    NotApplicable,
    NotApplicableAt,
    PartialAssignment,
    Plan,
    State,
    Task,
    Variable,
    applicable,
    apply_action,
    conflict_free,
    is_goal,
    validate_plan,
)
from .sas_io import emit_sas, parse_sas
from .graphs import (
    ASG,
    DTG,
    PDG,
    CausalGraph,
    Stratification,
    build_all_dtgs,
    build_asg,
    build_causal_graph,
    build_dtg,
    build_pdg,
    stratify,
)
from .strategies import (
    ExpansionContext,
    ExpansionStrategy,
    StrategyConfig,
    ec_expansion,
    full_expansion,
    is_left_commutative,
    landmark_action_set,
    make_strategy,
    sac_expansion,
    sp_filter,
)
from .heuristics import h_add, h_blind, h_goal_count, h_max, make_heuristic
from .search import Limits, SearchResult, astar, bfs, gbfs

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ASG",
    "CausalGraph",
    "DTG",
    "ExpansionContext",
    "ExpansionStrategy",
    "GoalNotReached",
    "InvalidTask",
    "Limits",
    "NotApplicable",
    "NotApplicableAt",
    "PDG",
    "PartialAssignment",
    "Plan",
    "SearchResult",
    "State",
    "Stratification",
    "StrategyConfig",
    "Task",
    "Variable",
    "applicable",
    "apply_action",
    "astar",
    "bfs",
    "build_all_dtgs",
    "build_asg",
    "build_causal_graph",
    "build_dtg",
    "build_pdg",
    "conflict_free",
    "ec_expansion",
    "emit_sas",
    "full_expansion",
    "gbfs",
    "h_add",
    "h_blind",
    "h_goal_count",
    "h_max",
    "is_goal",
    "is_left_commutative",
    "landmark_action_set",
    "make_heuristic",
    "make_strategy",
    "parse_sas",
    "sac_expansion",
    "sp_filter",
    "stratify",
    "validate_plan",
    "__version__",
]
