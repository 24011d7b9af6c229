"""Command-line front end.

Subcommands: plan (solve one file, write plan and stats), inspect (emit
the derived graphs and per-state expansion sets), verify (seeded
verification suites with a JSON report), bench (run a directory of
instances under several strategies, CSV and JSON output).

Exit codes: 0 solved or clean, 1 proven unsolvable, 2 resource limit,
3 input error, 4 verification violations.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import oracle
from .graphs import (
    asg_to_dot,
    build_all_dtgs,
    build_asg,
    build_causal_graph,
    build_pdg,
    causal_graph_to_dot,
    dtg_to_dot,
    pdg_to_dot,
    stratify,
)
from .heuristics import HEURISTICS, make_heuristic
from .model import State, Task, validate_plan
from .sas_io import SasError, parse_sas
from .search import SOLVED, UNSOLVABLE, Limits, astar, bfs, gbfs
from .strategies import KINDS, ExpansionContext, StrategyConfig, make_strategy

EXIT_SOLVED = 0
EXIT_UNSOLVABLE = 1
EXIT_LIMIT = 2
EXIT_INPUT = 3
EXIT_VIOLATIONS = 4


class _InputError(Exception):
    pass


def _load_task(path: str) -> Task:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from exc
    try:
        return parse_sas(text)
    except SasError as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _strategy_config(args) -> StrategyConfig:
    return StrategyConfig(
        sp_closed=args.sp_closed, strat_tie_break=args.strat_tiebreak
    )


def _limits(args) -> Limits:
    return Limits(max_expanded=args.max_nodes, max_time=args.max_time)


def _run_search(task: Task, args):
    strategy = make_strategy(task, args.por, _strategy_config(args))
    if args.search == "bfs":
        return bfs(task, strategy, _limits(args))
    heuristic = make_heuristic(task, args.heuristic)
    engine = astar if args.search == "astar" else gbfs
    return engine(task, heuristic, strategy, _limits(args))


def _stats_json(task: Task, args, result) -> dict:
    return {
        "outcome": result.outcome,
        "cost": result.plan.cost if result.plan else None,
        "expanded": result.expanded,
        "generated": result.generated,
        "time_ms": result.wall_time * 1000.0,
        "peak_open": result.peak_open_size,
        "plan_length": len(result.plan.steps) if result.plan else None,
        "search": args.search,
        "heuristic": args.heuristic if args.search != "bfs" else None,
        "por": args.por,
    }


def _plan_text(task: Task, plan) -> str:
    lines = [f"({task.actions[a].name})" for a in plan.steps]
    unit = "unit cost" if not task.uses_metric else "general cost"
    lines.append(f"; cost = {plan.cost} ({unit})")
    return "\n".join(lines) + "\n"


def cmd_plan(args) -> int:
    try:
        task = _load_task(args.file)
        result = _run_search(task, args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:  # e.g. bfs on a non-unit-cost task
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    stats = _stats_json(task, args, result)
    if args.stats_json:
        Path(args.stats_json).write_text(json.dumps(stats, indent=2) + "\n")
    print(json.dumps(stats, indent=2))
    if result.outcome == SOLVED:
        assert result.plan is not None
        validate_plan(task, result.plan.steps)  # refuse to report a bogus plan
        Path(args.plan_out).write_text(_plan_text(task, result.plan))
        return EXIT_SOLVED
    if result.outcome == UNSOLVABLE:
        return EXIT_UNSOLVABLE
    return EXIT_LIMIT


def _parse_state(task: Task, text: str) -> State:
    if text == "initial":
        return task.initial
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise _InputError(f"bad state {text!r}; use 'initial' or comma-separated values")
    if len(values) != task.num_variables:
        raise _InputError(f"state needs {task.num_variables} values")
    return State(values)


def _graph_json(nodes, edges) -> dict:
    return {"nodes": list(nodes), "edges": [list(e) for e in edges]}


def _inspect_one(task: Task, token: str, as_json: bool) -> str:
    dtgs = build_all_dtgs(task)
    if token.startswith("dtg:"):
        var = int(token.split(":", 1)[1])
        if not 0 <= var < task.num_variables:
            raise _InputError(f"no variable {var}")
        dtg = dtgs[var]
        if as_json:
            names = task.variables[var].value_names
            label = lambda v: "v0" if v < 0 else names[v]
            return json.dumps(
                {
                    "variable": var,
                    "nodes": ["v0", *names],
                    "edges": [
                        {
                            "from": label(e.source),
                            "to": label(e.target),
                            "actions": [task.actions[a].name for a in sorted(e.actions)],
                        }
                        for e in dtg.edges
                    ],
                },
                indent=2,
            )
        return dtg_to_dot(task, dtg)
    if token == "cg":
        cg = build_causal_graph(task)
        if as_json:
            names = [v.name for v in task.variables]
            return json.dumps(
                _graph_json(names, [(names[u], names[w]) for u, w in sorted(cg.edges)]),
                indent=2,
            )
        return causal_graph_to_dot(task, cg)
    if token.startswith("asg@"):
        state = _parse_state(task, token[4:])
        asg = build_asg(task, state)
        if as_json:
            names = [a.name for a in task.actions]
            return json.dumps(
                _graph_json(names, [(names[a], names[b]) for a, b in sorted(asg.edges)]),
                indent=2,
            )
        return asg_to_dot(task, asg)
    if token.startswith("pdg@"):
        state = _parse_state(task, token[4:])
        pdg = build_pdg(task, state, dtgs)
        if as_json:
            names = [v.name for v in task.variables]
            return json.dumps(
                _graph_json(names, [(names[i], names[j]) for i, j in sorted(pdg.edges)]),
                indent=2,
            )
        return pdg_to_dot(task, pdg)
    if token == "strata":
        strat = stratify(task)
        return json.dumps(
            {
                "variable_level": {
                    v.name: strat.variable_level[v.id] for v in task.variables
                },
                "action_level": {
                    a.name: strat.action_level[a.id] for a in task.actions
                },
            },
            indent=2,
        )
    if token.startswith("expansion@"):
        state = _parse_state(task, token[10:])
        ctx = ExpansionContext(state, None)
        sets = {}
        for kind in KINDS:
            strategy = make_strategy(task, kind)
            sets[kind] = [task.actions[a].name for a in strategy.expansion(ctx)]
        return json.dumps(sets, indent=2)
    raise _InputError(f"unknown inspect target {token!r}")


def cmd_inspect(args) -> int:
    try:
        task = _load_task(args.file)
        chunks = [_inspect_one(task, token, args.json) for token in args.show]
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = "\n".join(chunks)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_SOLVED


class _DropOneSac:
    """Test hook: a deliberately faulty SAC dropping one action per set."""

    def __init__(self, inner):
        self.inner = inner
        self.kind = inner.kind
        self.task = inner.task

    def expansion(self, ctx):
        ids = self.inner.expansion(ctx)
        return ids[:-1]

    def node_key(self, state, generating_action):
        return self.inner.node_key(state, generating_action)


def _fault_factory(fault: str):
    if fault == "none":
        return None

    def factory(task, kind, config=None):
        strategy = make_strategy(task, kind, config)
        if kind == "sac":
            return _DropOneSac(strategy)
        return strategy

    return factory


def cmd_verify(args) -> int:
    tasks = oracle.default_task_stream(
        args.seeds, start=args.seed_start, max_states=args.max_states
    )
    factory = _fault_factory(args.inject_fault)
    reports = []
    suites = set(args.suites or ["all"])

    def wants(name: str) -> bool:
        return "all" in suites or name in suites

    if wants("comm"):
        reports.append(oracle.suite_commutativity(tasks, args.samples, seed=0))
    if wants("stubborn"):
        reports.append(
            oracle.suite_stubborn(
                tasks, horizon=args.horizon, strategy_factory=factory
            )
        )
    if wants("optimality"):
        reports.append(oracle.suite_optimality(tasks, strategy_factory=factory))
    if wants("sp"):
        reports.append(oracle.suite_sp(tasks, horizon=min(args.horizon, 5)))
    if wants("lemma"):
        reports.append(oracle.suite_lemma(tasks, horizon=min(args.horizon, 5)))
    if wants("ap"):
        reports.append(oracle.suite_action_preserving(tasks, horizon=4))

    payload = {
        "seeds": args.seeds,
        "ok": all(r.ok for r in reports),
        "reports": [r.to_json() for r in reports],
    }
    text = json.dumps(payload, indent=2)
    if args.json_out:
        Path(args.json_out).write_text(text + "\n")
    print(text)
    return EXIT_SOLVED if payload["ok"] else EXIT_VIOLATIONS


def _bench_one(job: dict) -> dict:
    row = {
        "instance": job["instance"],
        "strategy": job["por"],
        "outcome": None,
        "cost": None,
        "expanded": None,
        "generated": None,
        "time_ms": None,
        "error": None,
    }
    try:
        task = parse_sas(Path(job["path"]).read_text())
        strategy = make_strategy(
            task,
            job["por"],
            StrategyConfig(
                sp_closed=job["sp_closed"], strat_tie_break=job["strat_tiebreak"]
            ),
        )
        limits = Limits(max_expanded=job["max_nodes"], max_time=job["max_time"])
        if job["search"] == "bfs":
            result = bfs(task, strategy, limits)
        else:
            heuristic = make_heuristic(task, job["heuristic"])
            engine = astar if job["search"] == "astar" else gbfs
            result = engine(task, heuristic, strategy, limits)
        row.update(
            outcome=result.outcome,
            cost=result.plan.cost if result.plan else None,
            expanded=result.expanded,
            generated=result.generated,
            time_ms=result.wall_time * 1000.0,
        )
    except (OSError, SasError, ValueError) as exc:
        row.update(outcome="error", error=str(exc))
    return row


def cmd_bench(args) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        print(f"error: {directory} is not a directory", file=sys.stderr)
        return EXIT_INPUT
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    for s in strategies:
        if s not in KINDS:
            print(f"error: unknown strategy {s!r}", file=sys.stderr)
            return EXIT_INPUT
    files = sorted(directory.glob("*.sas"))
    jobs = [
        {
            "path": str(path),
            "instance": path.stem,
            "por": strategy,
            "search": args.search,
            "heuristic": args.heuristic,
            "max_time": args.max_time,
            "max_nodes": args.max_nodes,
            "sp_closed": args.sp_closed,
            "strat_tiebreak": args.strat_tiebreak,
        }
        for path in files
        for strategy in strategies
    ]
    if args.workers > 1 and jobs:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_bench_one, jobs))
    else:
        rows = [_bench_one(job) for job in jobs]
    order = {s: i for i, s in enumerate(strategies)}
    rows.sort(key=lambda r: (r["instance"], order[r["strategy"]]))

    fields = ["instance", "strategy", "outcome", "cost", "expanded", "generated", "time_ms", "error"]
    if args.csv_out:
        with open(args.csv_out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=fields)
            writer.writeheader()
            writer.writerows(rows)
    if args.json_out:
        Path(args.json_out).write_text(json.dumps(rows, indent=2) + "\n")
    for row in rows:
        print(
            f"{row['instance']:<24} {row['strategy']:<5} {str(row['outcome']):<14} "
            f"cost={row['cost']} expanded={row['expanded']} generated={row['generated']}"
        )
    return EXIT_SOLVED


def _add_search_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--search", choices=("astar", "gbfs", "bfs"), default="astar")
    parser.add_argument("--heuristic", choices=HEURISTICS, default="hmax")
    parser.add_argument("--por", choices=KINDS, default="none")
    parser.add_argument("--max-time", type=float, default=None, help="seconds")
    parser.add_argument("--max-nodes", type=int, default=None, help="expansion limit")
    parser.add_argument("--sp-closed", choices=("state", "state-level"), default="state")
    parser.add_argument(
        "--strat-tiebreak", choices=("canonical", "distinct"), default="canonical"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="porplan",
        description="SAS+ planner with partial-order-reduction expansion strategies",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="solve one .sas file")
    p.add_argument("file")
    _add_search_options(p)
    p.add_argument("--plan-out", default="sas_plan")
    p.add_argument("--stats-json", default=None)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("inspect", help="emit derived graphs and expansion sets")
    p.add_argument("file")
    p.add_argument(
        "show",
        nargs="+",
        help="dtg:IDX | cg | asg@STATE | pdg@STATE | strata | expansion@STATE "
        "(STATE: 'initial' or comma-separated values)",
    )
    p.add_argument("--json", action="store_true", help="JSON instead of DOT")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("verify", help="run the seeded verification suites")
    p.add_argument("--seeds", type=int, default=200)
    p.add_argument("--seed-start", type=int, default=0)
    p.add_argument("--horizon", type=int, default=6)
    p.add_argument("--samples", type=int, default=10, help="commutativity samples per task")
    p.add_argument("--max-states", type=int, default=oracle.DEFAULT_MAX_STATES)
    p.add_argument(
        "--suites",
        nargs="*",
        choices=("all", "comm", "stubborn", "optimality", "sp", "lemma", "ap"),
        default=["all"],
    )
    p.add_argument("--json-out", default=None)
    p.add_argument(
        "--inject-fault",
        choices=("none", "sac-drop"),
        default="none",
        help="deliberately break SAC (test hook)",
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run a directory of .sas instances")
    p.add_argument("directory")
    p.add_argument("--strategies", default="none,ec,sac")
    _add_search_options(p)
    p.add_argument("--csv-out", default=None)
    p.add_argument("--json-out", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
