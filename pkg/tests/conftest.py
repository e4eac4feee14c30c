"""Shared fixtures: corpus access, tiny net builders, random net
generation, and an independent brute-force path oracle.

The oracle replays the token game directly and never builds a
reachability graph, so it can cross-check the production enumeration.
"""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from contractcheck import (
    Arc,
    EventAlignment,
    EventLabel,
    Marking,
    PetriNet,
    Place,
    Transition,
    enabled_transitions,
    fire,
)

REPO_ROOT = Path(__file__).resolve().parents[1]
CORPUS_DIR = REPO_ROOT / "corpus"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS_DIR


def label(actor: str, action: str) -> EventLabel:
    return EventLabel(actor, action)


def chain_net(name: str, labels, *, temporal_at: set[int] = frozenset()) -> PetriNet:
    """p0(1) -> t1 -> p1 -> t2 -> ... linear chain."""
    places = [Place("p0", 1)] + [Place(f"p{i}") for i in range(1, len(labels) + 1)]
    transitions = []
    arcs = []
    for i, lab in enumerate(labels, start=1):
        tid = f"t{i}"
        transitions.append(Transition(tid, lab, temporal=(i - 1) in temporal_at))
        arcs.append(Arc("normal", f"p{i-1}", tid))
        arcs.append(Arc("normal", tid, f"p{i}"))
    return PetriNet(name, tuple(places), tuple(transitions), tuple(arcs))


def two_independent_net() -> PetriNet:
    """Two once-firing transitions with disjoint presets."""
    return PetriNet(
        "two_independent",
        places=(Place("a", 1), Place("a2"), Place("b", 1), Place("b2")),
        transitions=(
            Transition("t1", label("x", "one")),
            Transition("t2", label("x", "two")),
        ),
        arcs=(
            Arc("normal", "a", "t1"), Arc("normal", "t1", "a2"),
            Arc("normal", "b", "t2"), Arc("normal", "t2", "b2"),
        ),
    )


def brute_force_paths(net: PetriNet, *, max_depth: int = 64,
                      max_paths: int = 200_000) -> list[tuple[str, ...]]:
    """All simple token-game paths from the initial marking to a dead
    marking, as sorted transition-id tuples. No reachability graph."""
    out: list[tuple[str, ...]] = []
    initial = net.initial_marking

    def walk(marking: Marking, path: list[str], seen: set[Marking]) -> None:
        if len(out) > max_paths:
            raise AssertionError("oracle path budget exceeded")
        enabled = enabled_transitions(net, marking)
        if not enabled:
            out.append(tuple(path))
            return
        if len(path) >= max_depth:
            return
        for tid in enabled:
            nxt = fire(net, marking, tid)
            if nxt in seen:
                continue
            path.append(tid)
            seen.add(nxt)
            walk(nxt, path, seen)
            seen.discard(nxt)
            path.pop()

    walk(initial, [], {initial})
    return sorted(out)


ACTORS = ("alice", "bob", "carol")


def random_conservative_net(rng: random.Random, name: str = "random",
                            max_places: int = 5, max_transitions: int = 5,
                            max_tokens: int = 2) -> PetriNet:
    """Random net whose transitions never increase the token count, so the
    state space stays finite."""
    n_places = rng.randint(1, max_places)
    n_transitions = rng.randint(1, max_transitions)
    places = []
    for i in range(n_places):
        tokens = rng.randint(0, max_tokens) if i else rng.randint(1, max_tokens)
        kind = rng.choice(("none", "none", "power", "obligation"))
        places.append(Place(f"p{i}", tokens, kind))
    place_ids = [p.id for p in places]
    transitions = []
    arcs = []
    for i in range(n_transitions):
        tid = f"t{i}"
        transitions.append(
            Transition(
                tid,
                EventLabel(rng.choice(ACTORS), f"act{rng.randint(0, 5)}"),
                temporal=rng.random() < 0.15,
            )
        )
        preset = rng.sample(place_ids, rng.randint(1, min(2, n_places)))
        postset = rng.sample(place_ids, rng.randint(0, len(preset)))
        for pid in preset:
            arcs.append(Arc("normal", pid, tid))
        for pid in postset:
            arcs.append(Arc("normal", tid, pid))
        if rng.random() < 0.4:
            arcs.append(Arc("bidirectional", rng.choice(place_ids), tid))
        if rng.random() < 0.3:
            arcs.append(Arc("inhibitor", rng.choice(place_ids), tid))
    return PetriNet(name, tuple(places), tuple(transitions), tuple(arcs))


def random_alignment(rng: random.Random, ground: PetriNet,
                     candidate: PetriNet) -> EventAlignment:
    ground_labels = sorted(ground.labels)
    event_map = {}
    irrelevant = set()
    for lab in sorted(candidate.labels):
        roll = rng.random()
        if roll < 0.7 and ground_labels:
            event_map[lab] = rng.choice(ground_labels)
        elif roll < 0.85:
            irrelevant.add(lab)
    legal_map = {}
    cand_places = [p.id for p in candidate.places]
    ground_legal = [p.id for p in ground.legal_places]
    rng.shuffle(ground_legal)
    for target in ground_legal:
        if cand_places and rng.random() < 0.8:
            source = rng.choice(cand_places)
            if source not in legal_map:
                legal_map[source] = target
    illegal = []
    if ground_labels and rng.random() < 0.3:
        length = rng.randint(1, 2)
        illegal.append(tuple(rng.choice(ground_labels) for _ in range(length)))
    return EventAlignment.from_maps(
        "random", event_map, irrelevant, legal_map, illegal
    )
