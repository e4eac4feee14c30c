"""Event and legal-place correspondence between two nets.

An alignment relates a candidate net to a ground-truth net: a many-to-one
event map, a set of candidate events declared legally irrelevant, an
injective map from candidate places onto the ground net's legal places,
and optional illegal ground-event subsequences used for pruning.

Legal equivalence compares the projection of a ground marking onto legal
places against the mapped candidate places. A ground legal place with no
candidate counterpart is treated as permanently unmarked on the candidate
side: states that require it marked can never be matched.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .diagnostics import (
    SEVERITY_ERROR,
    SEVERITY_WARNING,
    ContractCheckError,
    Diagnostic,
)
from .petri import EventLabel, Marking, PetriNet
from .reachability import BehaviorEvent


class InvalidAlignment(ContractCheckError):
    def __init__(self, name: str, diagnostics: Iterable[Diagnostic]):
        self.alignment_name = name
        self.diagnostics = tuple(diagnostics)
        codes = ", ".join(sorted({d.code for d in self.diagnostics}))
        super().__init__(f"alignment '{name}' is invalid: {codes}")


@dataclass(frozen=True)
class EventAlignment:
    """Candidate-to-ground correspondence; canonicalized on construction."""

    name: str = ""
    event_pairs: tuple[tuple[EventLabel, EventLabel], ...] = ()
    irrelevant: frozenset[EventLabel] = frozenset()
    legal_pairs: tuple[tuple[str, str], ...] = ()
    illegal_sequences: tuple[tuple[EventLabel, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "event_pairs", tuple(sorted(self.event_pairs)))
        object.__setattr__(self, "irrelevant", frozenset(self.irrelevant))
        object.__setattr__(self, "legal_pairs", tuple(sorted(self.legal_pairs)))
        object.__setattr__(
            self, "illegal_sequences", tuple(sorted(self.illegal_sequences))
        )

    @classmethod
    def from_maps(
        cls,
        name: str = "",
        event_map: Mapping[EventLabel, EventLabel] | None = None,
        irrelevant: Iterable[EventLabel] = (),
        legal_map: Mapping[str, str] | None = None,
        illegal_sequences: Iterable[Sequence[EventLabel]] = (),
    ) -> "EventAlignment":
        return cls(
            name=name,
            event_pairs=tuple((event_map or {}).items()),
            irrelevant=frozenset(irrelevant),
            legal_pairs=tuple((legal_map or {}).items()),
            illegal_sequences=tuple(tuple(s) for s in illegal_sequences),
        )

    @cached_property
    def event_map(self) -> dict[EventLabel, EventLabel]:
        return dict(self.event_pairs)

    @cached_property
    def legal_map(self) -> dict[str, str]:
        return dict(self.legal_pairs)

    @cached_property
    def inverse_legal(self) -> dict[str, str]:
        """Ground legal place -> candidate place (valid once injectivity holds)."""
        return {ground: cand for cand, ground in self.legal_pairs}

    def map_label(self, label: EventLabel) -> EventLabel | None:
        return self.event_map.get(label)


@dataclass(frozen=True)
class LegalState:
    """Projection of a marking onto a net's legal places (zeros included)."""

    positions: tuple[tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(sorted(self.positions)))

    @cached_property
    def _map(self) -> dict[str, int]:
        return dict(self.positions)

    def tokens(self, place_id: str) -> int:
        return self._map.get(place_id, 0)

    def as_dict(self) -> dict[str, int]:
        return dict(self.positions)


def identity_alignment(net: PetriNet) -> EventAlignment:
    """The alignment of a net against itself."""
    return EventAlignment.from_maps(
        name=f"identity:{net.name}",
        event_map={label: label for label in net.labels},
        legal_map={p.id: p.id for p in net.legal_places},
    )


def validate_alignment(
    align: EventAlignment, ground: PetriNet, candidate: PetriNet
) -> list[Diagnostic]:
    """Referential checks; warnings flag ground legal places left unmapped."""
    out: list[Diagnostic] = []

    def err(code: str, message: str, subject: str | None = None) -> None:
        out.append(Diagnostic(code, SEVERITY_ERROR, message, subject))

    ground_labels = ground.labels
    cand_labels = candidate.labels
    for cand_label, ground_label in align.event_pairs:
        if cand_label not in cand_labels:
            err("E_UNKNOWN_EVENT", f"candidate event '{cand_label}' not in net '{candidate.name}'", str(cand_label))
        if ground_label not in ground_labels:
            err("E_UNKNOWN_EVENT", f"ground event '{ground_label}' not in net '{ground.name}'", str(ground_label))
        if cand_label in align.irrelevant:
            err("E_EVENT_OVERLAP", f"candidate event '{cand_label}' is both mapped and irrelevant", str(cand_label))
    for label in sorted(align.irrelevant):
        if label not in cand_labels:
            err("E_UNKNOWN_EVENT", f"irrelevant event '{label}' not in net '{candidate.name}'", str(label))

    targets_seen: dict[str, str] = {}
    for cand_place, ground_place in align.legal_pairs:
        if cand_place not in candidate.place_by_id:
            err("E_UNKNOWN_PLACE", f"candidate place '{cand_place}' not in net '{candidate.name}'", cand_place)
        gp = ground.place_by_id.get(ground_place)
        if gp is None:
            err("E_UNKNOWN_PLACE", f"ground place '{ground_place}' not in net '{ground.name}'", ground_place)
        elif not gp.is_legal:
            err("E_LEGAL_TARGET", f"ground place '{ground_place}' is not a legal position", ground_place)
        if ground_place in targets_seen:
            err(
                "E_LEGAL_INJECTIVE",
                f"ground place '{ground_place}' is targeted by both "
                f"'{targets_seen[ground_place]}' and '{cand_place}'",
                ground_place,
            )
        else:
            targets_seen[ground_place] = cand_place

    for seq in align.illegal_sequences:
        if not seq:
            err("E_EMPTY_SEQUENCE", "empty illegal sequence")
        for label in seq:
            if label not in ground_labels:
                err("E_UNKNOWN_EVENT", f"illegal-sequence event '{label}' not in net '{ground.name}'", str(label))

    mapped_targets = set(align.inverse_legal)
    for place in ground.legal_places:
        if place.id not in mapped_targets:
            out.append(
                Diagnostic(
                    "W_UNMAPPED_LEGAL",
                    SEVERITY_WARNING,
                    f"ground legal place '{place.id}' has no candidate counterpart; "
                    "states requiring it marked can never match",
                    place.id,
                )
            )
    return out


def legal_state(net: PetriNet, marking: Marking) -> LegalState:
    """Project a marking onto the net's legal places."""
    return LegalState(tuple((p.id, marking.tokens(p.id)) for p in net.legal_places))


def legal_equivalent(
    ground_state: LegalState,
    candidate_marking: Marking,
    candidate: PetriNet,
    align: EventAlignment,
    exempt: frozenset[str] = frozenset(),
) -> bool:
    """True iff every non-exempt ground legal position agrees with its
    mapped candidate place; unmapped positions must be unmarked."""
    inverse = align.inverse_legal
    cand_places = candidate.place_by_id
    cand_tokens = candidate_marking._map
    for ground_place, count in ground_state.positions:
        if ground_place in exempt:
            continue
        cand_place = inverse.get(ground_place)
        if cand_place is None:
            if count != 0:
                return False
        else:
            if cand_place not in cand_places:
                return False
            if cand_tokens.get(cand_place, 0) != count:
                return False
    return True


def temporal_exempt_positions(
    net: PetriNet, events: Sequence[BehaviorEvent]
) -> frozenset[str]:
    """Legal positions whose final state is attributable to temporal events.

    Computed by replaying the event deltas once in full and once with
    temporal transitions skipped, then diffing the legal projections.
    """
    full: dict[str, int] = {}
    skip: dict[str, int] = {}
    for event in events:
        delta = net.deltas.get(event.transition, {})
        for pid, d in delta.items():
            full[pid] = full.get(pid, 0) + d
            if not event.temporal:
                skip[pid] = skip.get(pid, 0) + d
    return frozenset(
        p.id for p in net.legal_places if full.get(p.id, 0) != skip.get(p.id, 0)
    )
