"""Drivers for the step relation.

`run` follows one schedule (first successor, or seeded uniform choice) to a
terminal, stuck, or budget-exhausted end and records the trace. `explore`
builds the whole reduction graph over all interleavings breadth-first,
deduplicating configurations by structural equality, so loops show up as
cycles instead of unbounded unrolling. `outcomes` collects the graph's
leaves, `to_dot` and `to_json_trace` serialize graph and trace in stable
orders so identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from typing import Union

from .env import render_procs, render_store
from .semantics import (
    Configuration, StuckInfo, diagnose, is_terminal, successors,
)
from .syntax import Redex, Value, pretty, pretty_expr, value_text

DEFAULT_MAX_STEPS = 10_000
DEFAULT_MAX_STATES = 50_000
DEFAULT_MAX_DEPTH = 10_000


@dataclass(frozen=True)
class Terminated:
    value: Value
    kind = "terminated"


@dataclass(frozen=True)
class Stuck:
    info: StuckInfo
    kind = "stuck"


@dataclass(frozen=True)
class BudgetExceeded:
    kind = "budget_exceeded"


Status = Union[Terminated, Stuck, BudgetExceeded]


@dataclass(frozen=True)
class Trace:
    origin: Configuration
    steps: tuple[tuple[str, Configuration], ...]
    status: Status

    def configurations(self) -> list[Configuration]:
        return [self.origin] + [c for _, c in self.steps]

    def rules(self) -> list[str]:
        return [rule for rule, _ in self.steps]


def run(c0: Configuration, schedule: str = "first", seed: int = 0,
        max_steps: int = DEFAULT_MAX_STEPS) -> Trace:
    """Reduce from `c0` under one schedule until done, stuck, or out of budget.

    "first" always takes the first successor (the left par side steps
    before the right); "random" draws uniformly with a fixed-seed generator
    so reruns reproduce the trace.
    """
    if schedule not in ("first", "random"):
        raise ValueError(f"unknown schedule {schedule!r}")
    rng = random.Random(seed)
    steps: list[tuple[str, Configuration]] = []
    current = c0
    while True:
        if is_terminal(current):
            return Trace(c0, tuple(steps), Terminated(current.stmt.value))
        options = successors(current)
        if not options:
            return Trace(c0, tuple(steps), Stuck(diagnose(current)))
        if len(steps) >= max_steps:
            return Trace(c0, tuple(steps), BudgetExceeded())
        chosen = options[0] if schedule == "first" else rng.choice(options)
        steps.append((chosen.rule, chosen.next))
        current = chosen.next


@dataclass(frozen=True)
class ReductionGraph:
    nodes: tuple[Configuration, ...]
    edges: tuple[tuple[int, str, int], ...]
    root: Configuration
    truncated: bool
    unexpanded: frozenset[int]

    def node_index(self, c: Configuration) -> int:
        return self.nodes.index(c)

    def out_degree(self, index: int) -> int:
        return sum(1 for src, _, _ in self.edges if src == index)


def explore(c0: Configuration, max_states: int = DEFAULT_MAX_STATES,
            max_depth: int = DEFAULT_MAX_DEPTH) -> ReductionGraph:
    """Breadth-first closure of the step relation from `c0`.

    Nodes are deduplicated configurations in discovery order; edges carry
    rule labels. `truncated` is set exactly when a budget cut something
    off: a new configuration was not admitted, or a node at the depth
    limit still had successors.
    """
    if max_states < 1 or max_depth < 1:
        raise ValueError("budgets must be at least 1")
    index = {c0: 0}
    nodes = [c0]
    depth = {0: 0}
    edges: list[tuple[int, str, int]] = []
    unexpanded: set[int] = set()
    truncated = False
    frontier = deque([0])
    while frontier:
        src = frontier.popleft()
        options = successors(nodes[src])
        if depth[src] >= max_depth:
            if options:
                truncated = True
                unexpanded.add(src)
            continue
        for step in options:
            target = step.next
            if target in index:
                edges.append((src, step.rule, index[target]))
                continue
            if len(nodes) >= max_states:
                truncated = True
                unexpanded.add(src)
                continue
            index[target] = len(nodes)
            depth[len(nodes)] = depth[src] + 1
            nodes.append(target)
            edges.append((src, step.rule, index[target]))
            frontier.append(index[target])
    return ReductionGraph(tuple(nodes), tuple(edges), c0, truncated,
                          frozenset(unexpanded))


@dataclass(frozen=True)
class OutcomeSet:
    terminals: frozenset[tuple[Value, str]]
    stuck: frozenset[StuckInfo]
    complete: bool


def outcomes(g: ReductionGraph) -> OutcomeSet:
    """Terminal values with their final stores, and stuck leaves.

    Nodes whose expansion a budget skipped are not leaves and contribute
    nothing; `complete` records whether the graph covered everything.
    """
    has_out = {src for src, _, _ in g.edges}
    terminals = set()
    stuck = set()
    for i, node in enumerate(g.nodes):
        if i in has_out or i in g.unexpanded:
            continue
        if is_terminal(node):
            terminals.add((node.stmt.value, render_store(node.store)))
        else:
            stuck.add(diagnose(node))
    return OutcomeSet(frozenset(terminals), frozenset(stuck),
                      complete=not g.truncated)


# ---------------------------------------------------------------------------
# Serialization

def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(g: ReductionGraph) -> str:
    """Graphviz rendering: node labels show statement and store, edges the
    rule path; the root is outlined bold. Discovery order throughout."""
    lines = ["digraph reduction {"]
    for i, node in enumerate(g.nodes):
        label = (_dot_escape(pretty(node.stmt)) + "\\n"
                 + _dot_escape(render_store(node.store)))
        style = ", penwidth=2" if i == 0 else ""
        lines.append(f'  n{i} [label="{label}"{style}];')
    for src, rule, dst in g.edges:
        lines.append(f'  n{src} -> n{dst} [label="{_dot_escape(rule)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _status_line(t: Trace) -> dict:
    line: dict = {"status": t.status.kind, "steps": len(t.steps)}
    match t.status:
        case Terminated(value):
            line["value"] = value_text(value)
        case Stuck(info):
            line["reason"] = info.reason
            line["at"] = _render_redex(info.at)
    return line


def _render_redex(at: Redex) -> str:
    try:
        return pretty(at)
    except TypeError:
        return pretty_expr(at)


def to_json_trace(t: Trace) -> str:
    """One JSON object per step plus a final status line."""
    lines = []
    for n, (rule, conf) in enumerate(t.steps, start=1):
        lines.append(json.dumps({
            "step": n,
            "rule": rule,
            "stmt": pretty(conf.stmt),
            "store": render_store(conf.store),
            "procs": render_procs(conf.procs),
        }))
    lines.append(json.dumps(_status_line(t)))
    return "\n".join(lines) + "\n"
