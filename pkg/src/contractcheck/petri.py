"""Immutable Petri-net model with token-game semantics.

Places hold plain non-negative token counts (no colors). Transitions carry
an (actor, action) event label and a temporal flag; the flag matters only
to behavior matching, never to firing. Arcs come in three kinds:

* ``normal``       directed place->transition or transition->place,
* ``inhibitor``    place->transition, disables the transition while the
                   place is marked,
* ``bidirectional`` shorthand for one consuming and one producing normal
                   arc on the same (place, transition) pair.

Everything here is a frozen dataclass; operations are pure functions, so
values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .diagnostics import (
    SEVERITY_ERROR,
    ContractCheckError,
    Diagnostic,
    errors_of,
)

LEGAL_NONE = "none"
LEGAL_POWER = "power"
LEGAL_OBLIGATION = "obligation"
LEGAL_KINDS = (LEGAL_NONE, LEGAL_POWER, LEGAL_OBLIGATION)

ARC_NORMAL = "normal"
ARC_INHIBITOR = "inhibitor"
ARC_BIDIRECTIONAL = "bidirectional"
ARC_KINDS = (ARC_NORMAL, ARC_INHIBITOR, ARC_BIDIRECTIONAL)


class UnknownPlace(ContractCheckError):
    """A marking refers to a place the net does not contain."""


class NotEnabled(ContractCheckError):
    """fire() was called for a transition that is not enabled."""


class InvalidNet(ContractCheckError):
    """An operation that requires a valid net received a broken one."""

    def __init__(self, net_name: str, diagnostics: Iterable[Diagnostic]):
        self.net_name = net_name
        self.diagnostics = tuple(diagnostics)
        codes = ", ".join(sorted({d.code for d in self.diagnostics}))
        super().__init__(f"net '{net_name}' is invalid: {codes}")


class EventLabel(NamedTuple):
    """An (actor, action) pair; both parts are significant for equality."""

    actor: str
    action: str

    def __str__(self) -> str:
        return f"{self.actor}:{self.action}"


@dataclass(frozen=True)
class Place:
    id: str
    initial_tokens: int = 0
    legal_kind: str = LEGAL_NONE
    is_lcp: bool = False

    @property
    def is_legal(self) -> bool:
        return self.legal_kind != LEGAL_NONE


@dataclass(frozen=True)
class Transition:
    id: str
    label: EventLabel
    temporal: bool = False


@dataclass(frozen=True)
class Arc:
    """One arc; for inhibitor and bidirectional arcs the canonical
    orientation is source=place, target=transition."""

    kind: str
    source: str
    target: str


@dataclass(frozen=True, order=True)
class Marking:
    """Token count per place, canonicalized: sorted entries, zeros dropped.

    Equality, hashing and ordering all follow the canonical entry tuple,
    so markings behave as plain values.
    """

    entries: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        merged: dict[str, int] = {}
        for pid, count in self.entries:
            if count < 0:
                raise ValueError(f"negative token count for place '{pid}'")
            if count:
                merged[pid] = merged.get(pid, 0) + count
        object.__setattr__(self, "entries", tuple(sorted(merged.items())))

    @classmethod
    def from_dict(cls, tokens: Mapping[str, int]) -> "Marking":
        return cls(tuple(tokens.items()))

    @cached_property
    def _map(self) -> dict[str, int]:
        return dict(self.entries)

    def tokens(self, place_id: str) -> int:
        return self._map.get(place_id, 0)

    def as_dict(self) -> dict[str, int]:
        return dict(self.entries)

    def places(self) -> tuple[str, ...]:
        return tuple(pid for pid, _ in self.entries)

    def __str__(self) -> str:
        inner = ", ".join(f"{p}:{n}" for p, n in self.entries)
        return "{" + inner + "}"


@dataclass(frozen=True)
class PetriNet:
    """A named net; element tuples are kept in canonical sorted order."""

    name: str
    places: tuple[Place, ...] = ()
    transitions: tuple[Transition, ...] = ()
    arcs: tuple[Arc, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "places", tuple(sorted(self.places, key=lambda p: p.id))
        )
        object.__setattr__(
            self, "transitions", tuple(sorted(self.transitions, key=lambda t: t.id))
        )
        object.__setattr__(
            self,
            "arcs",
            tuple(sorted(self.arcs, key=lambda a: (a.source, a.target, a.kind))),
        )

    @cached_property
    def place_by_id(self) -> dict[str, Place]:
        return {p.id: p for p in self.places}

    @cached_property
    def transition_by_id(self) -> dict[str, Transition]:
        return {t.id: t for t in self.transitions}

    @cached_property
    def legal_places(self) -> tuple[Place, ...]:
        return tuple(p for p in self.places if p.is_legal)

    @cached_property
    def labels(self) -> frozenset[EventLabel]:
        return frozenset(t.label for t in self.transitions)

    @cached_property
    def initial_marking(self) -> Marking:
        return Marking(tuple((p.id, p.initial_tokens) for p in self.places))

    @cached_property
    def consumes(self) -> dict[str, dict[str, int]]:
        """Per transition: tokens taken from each place on firing."""
        out: dict[str, dict[str, int]] = {t.id: {} for t in self.transitions}
        for arc in self.arcs:
            if arc.kind == ARC_NORMAL and arc.target in out:
                row = out[arc.target]
                row[arc.source] = row.get(arc.source, 0) + 1
            elif arc.kind == ARC_BIDIRECTIONAL and arc.target in out:
                row = out[arc.target]
                row[arc.source] = row.get(arc.source, 0) + 1
        return out

    @cached_property
    def produces(self) -> dict[str, dict[str, int]]:
        """Per transition: tokens put into each place on firing."""
        out: dict[str, dict[str, int]] = {t.id: {} for t in self.transitions}
        for arc in self.arcs:
            if arc.kind == ARC_NORMAL and arc.source in out:
                row = out[arc.source]
                row[arc.target] = row.get(arc.target, 0) + 1
            elif arc.kind == ARC_BIDIRECTIONAL and arc.target in out:
                row = out[arc.target]
                row[arc.source] = row.get(arc.source, 0) + 1
        return out

    @cached_property
    def inhibitors(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {t.id: [] for t in self.transitions}
        for arc in self.arcs:
            if arc.kind == ARC_INHIBITOR and arc.target in out:
                out[arc.target].append(arc.source)
        return {tid: tuple(sorted(pids)) for tid, pids in out.items()}

    @cached_property
    def deltas(self) -> dict[str, dict[str, int]]:
        """Net token change per place for each transition."""
        out: dict[str, dict[str, int]] = {}
        for t in self.transitions:
            delta: dict[str, int] = {}
            for pid, n in self.produces[t.id].items():
                delta[pid] = delta.get(pid, 0) + n
            for pid, n in self.consumes[t.id].items():
                delta[pid] = delta.get(pid, 0) - n
            out[t.id] = {pid: d for pid, d in delta.items() if d}
        return out

    @cached_property
    def lcp_guarded(self) -> frozenset[str]:
        """Transitions already restrained by a loop-control place."""
        guarded = set()
        for arc in self.arcs:
            if arc.kind != ARC_INHIBITOR:
                continue
            place = self.place_by_id.get(arc.source)
            if place is not None and place.is_lcp:
                guarded.add(arc.target)
        return frozenset(guarded)


def validate_net(net: PetriNet) -> list[Diagnostic]:
    """Structural validation; returns an empty list iff the net is sound."""
    out: list[Diagnostic] = []

    def err(code: str, message: str, subject: str | None = None) -> None:
        out.append(Diagnostic(code, SEVERITY_ERROR, message, subject))

    seen: dict[str, str] = {}
    for place in net.places:
        if not place.id:
            err("E_EMPTY_ID", "place with empty identifier")
        elif place.id in seen:
            err("E_DUP_ID", f"identifier '{place.id}' used more than once", place.id)
        else:
            seen[place.id] = "place"
        if place.initial_tokens < 0:
            err("E_BAD_TOKENS", f"place '{place.id}' has negative tokens", place.id)
        if place.legal_kind not in LEGAL_KINDS:
            err("E_BAD_KIND", f"place '{place.id}' has legal kind '{place.legal_kind}'", place.id)
        if place.is_lcp and (place.initial_tokens != 0 or place.legal_kind != LEGAL_NONE):
            err(
                "E_LCP_TOKENS",
                f"loop-control place '{place.id}' must start empty and carry no legal kind",
                place.id,
            )

    for t in net.transitions:
        if not t.id:
            err("E_EMPTY_ID", "transition with empty identifier")
        elif t.id in seen:
            err("E_DUP_ID", f"identifier '{t.id}' used more than once", t.id)
        else:
            seen[t.id] = "transition"
        if not t.label.actor or not t.label.action:
            err("E_EMPTY_LABEL", f"transition '{t.id}' has an empty actor or action", t.id)

    places = net.place_by_id
    transitions = net.transition_by_id
    for arc in net.arcs:
        tag = f"{arc.source}->{arc.target}"
        if arc.kind not in ARC_KINDS:
            err("E_BAD_KIND", f"arc {tag} has kind '{arc.kind}'", tag)
            continue
        src_place = arc.source in places
        src_trans = arc.source in transitions
        tgt_place = arc.target in places
        tgt_trans = arc.target in transitions
        if not (src_place or src_trans) or not (tgt_place or tgt_trans):
            err("E_ARC_ENDPOINTS", f"arc {tag} references an unknown element", tag)
            continue
        if arc.kind == ARC_NORMAL:
            if not ((src_place and tgt_trans) or (src_trans and tgt_place)):
                err(
                    "E_ARC_ENDPOINTS",
                    f"arc {tag} must connect a place and a transition",
                    tag,
                )
        else:
            if not (src_place and tgt_trans):
                err(
                    "E_ARC_ENDPOINTS",
                    f"{arc.kind} arc {tag} must run from a place to a transition",
                    tag,
                )

    if net.places and not any(p.initial_tokens > 0 for p in net.places):
        err("E_NO_INITIAL_TOKENS", "no place carries an initial token")
    if not net.places:
        err("E_NO_INITIAL_TOKENS", "net has no places")

    return out


def _check_marking(net: PetriNet, marking: Marking) -> None:
    for pid, _ in marking.entries:
        if pid not in net.place_by_id:
            raise UnknownPlace(f"marking refers to unknown place '{pid}' in net '{net.name}'")


def is_enabled(net: PetriNet, marking: Marking, transition_id: str) -> bool:
    if transition_id not in net.transition_by_id:
        return False
    for pid, need in net.consumes[transition_id].items():
        if marking.tokens(pid) < need:
            return False
    for pid in net.inhibitors[transition_id]:
        if marking.tokens(pid) > 0:
            return False
    return True


def enabled_transitions(net: PetriNet, marking: Marking) -> list[str]:
    """Transitions enabled in ``marking``, sorted by id for determinism."""
    _check_marking(net, marking)
    return [t.id for t in net.transitions if is_enabled(net, marking, t.id)]


def fire(net: PetriNet, marking: Marking, transition_id: str) -> Marking:
    """Fire one enabled transition; returns the successor marking."""
    _check_marking(net, marking)
    if not is_enabled(net, marking, transition_id):
        raise NotEnabled(
            f"transition '{transition_id}' is not enabled in {marking} of net '{net.name}'"
        )
    tokens = marking.as_dict()
    for pid, d in net.deltas[transition_id].items():
        tokens[pid] = tokens.get(pid, 0) + d
    return Marking.from_dict(tokens)


def fire_sequence(net: PetriNet, marking: Marking, transition_ids: Iterable[str]) -> Marking:
    """Replay a transition sequence; raises NotEnabled on the first stuck step."""
    current = marking
    for tid in transition_ids:
        current = fire(net, current, tid)
    return current


def insert_loop_controls(net: PetriNet) -> PetriNet:
    """Add a loop-control place to every unguarded self-looping transition.

    A transition self-loops when it consumes and produces the same count on
    some place, leaving it unchanged. Each such transition gains a fresh
    empty place fed by the transition and wired back with an inhibitor arc,
    capping the transition at one firing per path. Idempotent.
    """
    taken = set(net.place_by_id) | set(net.transition_by_id)
    new_places: list[Place] = []
    new_arcs: list[Arc] = []
    for t in net.transitions:
        if t.id in net.lcp_guarded:
            continue
        cons = net.consumes[t.id]
        prod = net.produces[t.id]
        loops = any(pid in prod and prod[pid] == n for pid, n in cons.items())
        if not loops:
            continue
        qid = f"lcp_{t.id}"
        while qid in taken:
            qid += "_"
        taken.add(qid)
        new_places.append(Place(qid, initial_tokens=0, is_lcp=True))
        new_arcs.append(Arc(ARC_NORMAL, t.id, qid))
        new_arcs.append(Arc(ARC_INHIBITOR, qid, t.id))
    if not new_places:
        return net
    return replace(
        net,
        places=net.places + tuple(new_places),
        arcs=net.arcs + tuple(new_arcs),
    )


def require_valid(net: PetriNet) -> None:
    """Raise InvalidNet when structural validation reports errors."""
    problems = errors_of(validate_net(net))
    if problems:
        raise InvalidNet(net.name, problems)
