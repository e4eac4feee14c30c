"""Reachability graph construction and behavior enumeration.

The graph is built breadth-first up to a configurable state budget; node
and edge order is fully deterministic (discovery order, transitions
expanded in id order). Behaviors are simple paths from the root to a dead
marking, emitted in lexicographic order of their transition sequences.
Nets whose graphs have no dead marking are refused unless the caller
explicitly allows it, because behaviors are undefined there; the usual fix
is the loop-control transform.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

from .diagnostics import ContractCheckError
from .petri import EventLabel, Marking, PetriNet, require_valid


class StateExplosion(ContractCheckError):
    def __init__(self, net_name: str, count: int):
        self.net_name = net_name
        self.count = count
        super().__init__(
            f"state space of net '{net_name}' exceeds {count - 1} markings"
        )


class PathExplosion(ContractCheckError):
    def __init__(self, net_name: str, count: int):
        self.net_name = net_name
        self.count = count
        super().__init__(f"net '{net_name}' has more than {count - 1} behaviors")


class NoTerminalMarkings(ContractCheckError):
    def __init__(self, net_name: str):
        self.net_name = net_name
        super().__init__(
            f"reachability graph of net '{net_name}' has no terminal markings; "
            "behaviors are undefined (insert_loop_controls may break the loops)"
        )


@dataclass(frozen=True)
class ExplorationLimits:
    max_states: int = 100_000
    max_paths: int = 100_000
    max_depth: int = 10_000

    def __post_init__(self):
        for field in ("max_states", "max_paths", "max_depth"):
            if getattr(self, field) <= 0:
                raise ValueError(f"{field} must be positive")


DEFAULT_LIMITS = ExplorationLimits()


class RGEdge(NamedTuple):
    source: Marking
    transition: str
    label: EventLabel
    temporal: bool
    target: Marking


class BehaviorEvent(NamedTuple):
    transition: str
    label: EventLabel
    temporal: bool


@dataclass(frozen=True)
class Behavior:
    """One event sequence ending in a dead marking."""

    events: tuple[BehaviorEvent, ...]
    final_marking: Marking

    @cached_property
    def transition_ids(self) -> tuple[str, ...]:
        return tuple(e.transition for e in self.events)

    @cached_property
    def labels(self) -> tuple[EventLabel, ...]:
        return tuple(e.label for e in self.events)

    def __len__(self) -> int:
        return len(self.events)

    def __str__(self) -> str:
        return " ".join(str(e.label) for e in self.events) or "<empty>"


@dataclass(frozen=True)
class BehaviorSet:
    behaviors: tuple[Behavior, ...]
    source_net: str

    def __post_init__(self):
        seen = set()
        for b in self.behaviors:
            key = b.transition_ids
            if key in seen:
                raise ValueError(
                    f"duplicate behavior {key!r} in set for net '{self.source_net}'"
                )
            seen.add(key)

    def __len__(self) -> int:
        return len(self.behaviors)

    def __iter__(self) -> Iterator[Behavior]:
        return iter(self.behaviors)

    def __getitem__(self, index: int) -> Behavior:
        return self.behaviors[index]


@dataclass(frozen=True)
class ReachabilityGraph:
    net_name: str
    root: Marking
    nodes: tuple[Marking, ...]
    edges: tuple[RGEdge, ...]
    terminals: tuple[Marking, ...]

    @cached_property
    def successors(self) -> dict[Marking, tuple[RGEdge, ...]]:
        out: dict[Marking, list[RGEdge]] = {m: [] for m in self.nodes}
        for edge in self.edges:
            out[edge.source].append(edge)
        return {m: tuple(edges) for m, edges in out.items()}

    @cached_property
    def node_index(self) -> dict[Marking, int]:
        return {m: i for i, m in enumerate(self.nodes)}

    @cached_property
    def _indexed_successors(self) -> list[tuple[tuple[RGEdge, int], ...]]:
        index = self.node_index
        out: list[list[tuple[RGEdge, int]]] = [[] for _ in self.nodes]
        for edge in self.edges:
            out[index[edge.source]].append((edge, index[edge.target]))
        return [tuple(row) for row in out]

    @cached_property
    def fired_transitions(self) -> frozenset[str]:
        return frozenset(e.transition for e in self.edges)


class _Compiled:
    """Index-vector view of a net, for the tight BFS loop."""

    def __init__(self, net: PetriNet):
        self.place_ids = tuple(p.id for p in net.places)
        index = {pid: i for i, pid in enumerate(self.place_ids)}
        self.initial = tuple(p.initial_tokens for p in net.places)
        self.transitions = []
        for t in net.transitions:  # already sorted by id
            needs = tuple((index[p], n) for p, n in sorted(net.consumes[t.id].items()))
            inhib = tuple(index[p] for p in net.inhibitors[t.id])
            delta = tuple((index[p], d) for p, d in sorted(net.deltas[t.id].items()))
            self.transitions.append((t.id, t.label, t.temporal, needs, inhib, delta))

    def enabled(self, vec: tuple[int, ...], needs, inhib) -> bool:
        for i, n in needs:
            if vec[i] < n:
                return False
        for i in inhib:
            if vec[i]:
                return False
        return True

    def apply(self, vec: tuple[int, ...], delta) -> tuple[int, ...]:
        out = list(vec)
        for i, d in delta:
            out[i] += d
        return tuple(out)

    def marking(self, vec: tuple[int, ...]) -> Marking:
        return Marking(
            tuple((pid, n) for pid, n in zip(self.place_ids, vec) if n)
        )


def build_reachability_graph(
    net: PetriNet, limits: ExplorationLimits = DEFAULT_LIMITS
) -> ReachabilityGraph:
    """Breadth-first fixpoint over the token game from the initial marking."""
    require_valid(net)
    compiled = _Compiled(net)
    root = compiled.initial
    visited: dict[tuple[int, ...], int] = {root: 0}
    order: list[tuple[int, ...]] = [root]
    raw_edges: list[tuple[tuple[int, ...], str, EventLabel, bool, tuple[int, ...]]] = []
    has_out: set[tuple[int, ...]] = set()
    queue: deque[tuple[int, ...]] = deque([root])

    while queue:
        src = queue.popleft()
        for tid, label, temporal, needs, inhib, delta in compiled.transitions:
            if not compiled.enabled(src, needs, inhib):
                continue
            tgt = compiled.apply(src, delta)
            if tgt not in visited:
                if len(visited) >= limits.max_states:
                    raise StateExplosion(net.name, len(visited) + 1)
                visited[tgt] = len(order)
                order.append(tgt)
                queue.append(tgt)
            raw_edges.append((src, tid, label, temporal, tgt))
            has_out.add(src)

    markings = {vec: compiled.marking(vec) for vec in order}
    nodes = tuple(markings[vec] for vec in order)
    edges = tuple(
        RGEdge(markings[s], tid, label, temporal, markings[t])
        for s, tid, label, temporal, t in raw_edges
    )
    terminals = tuple(markings[vec] for vec in order if vec not in has_out)
    return ReachabilityGraph(net.name, nodes[0], nodes, edges, terminals)


def enumerate_behaviors(
    rg: ReachabilityGraph,
    limits: ExplorationLimits = DEFAULT_LIMITS,
    *,
    allow_no_terminal: bool = False,
) -> BehaviorSet:
    """All simple root->terminal paths, lexicographic by transition sequence."""
    if not rg.terminals:
        if not allow_no_terminal:
            raise NoTerminalMarkings(rg.net_name)
        return BehaviorSet((), rg.net_name)

    behaviors: list[Behavior] = []
    succ = rg._indexed_successors
    # Per source node: (target index, event, final marking) per outgoing edge.
    steps = [
        tuple(
            (tgt, BehaviorEvent(e.transition, e.label, e.temporal), e.target)
            for e, tgt in row
        )
        for row in succ
    ]

    def emit(events: list[BehaviorEvent], final: Marking) -> None:
        if len(behaviors) >= limits.max_paths:
            raise PathExplosion(rg.net_name, len(behaviors) + 1)
        behaviors.append(Behavior(tuple(events), final))

    root_idx = rg.node_index[rg.root]
    if not steps[root_idx]:
        emit([], rg.root)
        return BehaviorSet(tuple(behaviors), rg.net_name)

    stack = [iter(steps[root_idx])]
    trail_nodes: list[int] = []
    trail_events: list[BehaviorEvent] = []
    on_path: set[int] = {root_idx}
    max_depth = limits.max_depth
    while stack:
        step = next(stack[-1], None)
        if step is None:
            stack.pop()
            if trail_nodes:
                on_path.discard(trail_nodes.pop())
                trail_events.pop()
            continue
        tgt, event, target_marking = step
        if tgt in on_path or len(trail_events) + 1 > max_depth:
            continue
        if not steps[tgt]:
            trail_events.append(event)
            emit(trail_events, target_marking)
            trail_events.pop()
            continue
        trail_nodes.append(tgt)
        trail_events.append(event)
        on_path.add(tgt)
        stack.append(iter(steps[tgt]))
    return BehaviorSet(tuple(behaviors), rg.net_name)


def find_dead_transitions(net: PetriNet, rg: ReachabilityGraph) -> frozenset[str]:
    """Transitions that fire on no edge of the reachability graph."""
    return frozenset(t.id for t in net.transitions) - rg.fired_transitions
