"""Behavior matching relations between a ground net and a candidate net.

Three relations feed the compliance metrics:

* ``strict_match``  — every non-temporal ground event is realized by a
  consecutive non-empty block of candidate events mapping to it, in order;
  temporal ground events may be realized by an empty block. Extra candidate
  events are allowed only as a trailing suffix, and the candidate's final
  marking (suffix included) must stay legally equivalent to the ground
  terminal state. Mid-sequence unmapped candidate events break strictness.
* ``covering_match`` — only end-state legal equivalence is required; event
  realization may be partial or empty.
* ``embedding_match`` — the candidate behavior, fully mapped and with
  consecutive duplicates collapsed, must embed as an ordered subsequence of
  the ground behavior, and the candidate's final legal state must agree
  with the ground state reached right after the last embedded event.

Legal positions whose change along the ground behavior is attributable
only to temporal events are exempt from every state comparison. All
matchers are pure, deterministic, and O(ground x candidate).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .alignment import (
    EventAlignment,
    LegalState,
    legal_equivalent,
    legal_state,
    temporal_exempt_positions,
)
from .petri import EventLabel, PetriNet
from .reachability import Behavior, BehaviorSet

REASON_ORDER = "order violation"
REASON_MISSING = "missing event"
REASON_EXTRA_MID = "extra mid-sequence event"
REASON_STATE = "legal-state mismatch"
REASON_UNMAPPED = "unmapped event"

Witness = tuple[tuple[int, tuple[int, int]], ...]


@dataclass(frozen=True)
class MatchResult:
    """Outcome of one behavior comparison.

    The witness maps ground event indices to half-open candidate index
    ranges over the original candidate event list; it is present exactly
    when the pair matched. ``reason`` carries a stable failure code.
    """

    matched: bool
    witness: Witness | None = None
    reason: str | None = None

    def __post_init__(self):
        if self.matched != (self.witness is not None):
            raise ValueError("witness must be present iff matched")

    def witness_dict(self) -> dict[int, tuple[int, int]]:
        return dict(self.witness or ())


def _ok(witness: Witness) -> MatchResult:
    return MatchResult(True, witness=witness)


def _fail(reason: str) -> MatchResult:
    return MatchResult(False, reason=reason)


def _one_to_one_witness(gctx: "GroundContext", cctx: "CandidateContext") -> Witness:
    """Witness for the exact case: ground event i realized by kept event i."""
    kept = cctx.kept
    return tuple((i, (kept[i][0], kept[i][0] + 1)) for i in range(len(gctx.labels)))


class GroundContext:
    """Cached per-ground-behavior data shared across many comparisons.

    Prefix replays track legal places only, which is all that state
    comparisons ever read.
    """

    def __init__(self, behavior: Behavior, net: PetriNet):
        self.behavior = behavior
        self.net = net
        self.labels = behavior.labels
        self.temporal = tuple(e.temporal for e in behavior.events)
        self.has_temporal = any(self.temporal)
        self._prefix_full: list[dict[str, int]] | None = None
        self._prefix_skip: list[dict[str, int]] | None = None

    @cached_property
    def final_state(self) -> LegalState:
        return legal_state(self.net, self.behavior.final_marking)

    @cached_property
    def exempt_full(self) -> frozenset[str]:
        if not self.has_temporal:
            return frozenset()
        return temporal_exempt_positions(self.net, self.behavior.events)

    @cached_property
    def nontemporal_need(self) -> Counter:
        return Counter(
            lab for lab, temp in zip(self.labels, self.temporal) if not temp
        )

    @cached_property
    def _legal_ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.net.legal_places)

    def _ensure_prefixes(self, upto: int) -> None:
        if self._prefix_full is None:
            base = {p.id: p.initial_tokens for p in self.net.legal_places}
            self._prefix_full = [base]
            self._prefix_skip = [base]
        while len(self._prefix_full) <= upto:
            k = len(self._prefix_full) - 1
            event = self.behavior.events[k]
            delta = self.net.deltas.get(event.transition, {})
            legal_delta = {p: d for p, d in delta.items() if p in self._prefix_full[0]}
            if legal_delta:
                nxt_full = dict(self._prefix_full[-1])
                for pid, d in legal_delta.items():
                    nxt_full[pid] = nxt_full.get(pid, 0) + d
            else:
                nxt_full = self._prefix_full[-1]
            if legal_delta and not event.temporal:
                nxt_skip = dict(self._prefix_skip[-1])
                for pid, d in legal_delta.items():
                    nxt_skip[pid] = nxt_skip.get(pid, 0) + d
            else:
                nxt_skip = self._prefix_skip[-1]
            self._prefix_full.append(nxt_full)
            self._prefix_skip.append(nxt_skip)

    def state_after(self, prefix_len: int) -> LegalState:
        """Legal projection of the marking after the first ``prefix_len`` events."""
        if prefix_len == len(self.labels):
            return self.final_state
        self._ensure_prefixes(prefix_len)
        tokens = self._prefix_full[prefix_len]
        return LegalState(tuple(tokens.items()))

    def exempt_after(self, prefix_len: int) -> frozenset[str]:
        if not self.has_temporal:
            return frozenset()
        if prefix_len == len(self.labels):
            return self.exempt_full
        self._ensure_prefixes(prefix_len)
        full = self._prefix_full[prefix_len]
        skip = self._prefix_skip[prefix_len]
        return frozenset(pid for pid in full if full[pid] != skip.get(pid, 0))


class CandidateContext:
    """Cached per-candidate-behavior data: filtering and label mapping."""

    def __init__(self, behavior: Behavior, align: EventAlignment):
        self.behavior = behavior
        irrelevant = align.irrelevant
        mapping = align.event_map
        kept: list[tuple[int, EventLabel, EventLabel | None]] = []
        for idx, event in enumerate(behavior.events):
            label = event.label
            if label in irrelevant:
                continue
            kept.append((idx, label, mapping.get(label)))
        self.kept = tuple(kept)
        self.mapped_full = tuple(m for _, _, m in kept)
        self.mapped_only = tuple(m for m in self.mapped_full if m is not None)
        self.has_unmapped = len(self.mapped_only) != len(self.mapped_full)
        self.final_marking = behavior.final_marking

    @cached_property
    def have(self) -> Counter:
        return Counter(self.mapped_only)

    @cached_property
    def runs(self) -> tuple[tuple[EventLabel, int, int], ...]:
        """Maximal runs of equal mapped labels as (label, kept_start, kept_end)."""
        runs: list[tuple[EventLabel, int, int]] = []
        i = 0
        seq = self.mapped_full
        while i < len(seq):
            j = i
            while j < len(seq) and seq[j] == seq[i]:
                j += 1
            if seq[i] is not None:
                runs.append((seq[i], i, j))
            i = j
        return tuple(runs)

    def orig_span(self, kept_start: int, kept_end: int) -> tuple[int, int]:
        """Translate a kept-index range into an original-index range."""
        if kept_start >= kept_end:
            if kept_start < len(self.kept):
                pos = self.kept[kept_start][0]
            else:
                pos = len(self.behavior.events)
            return (pos, pos)
        return (self.kept[kept_start][0], self.kept[kept_end - 1][0] + 1)


def _factor(
    labels: Sequence[EventLabel],
    temporal: Sequence[bool],
    mapped: Sequence[EventLabel | None],
    want_witness: bool,
) -> tuple[int | None, list[list[int]] | None]:
    """Block-factoring feasibility via dynamic programming.

    ``ok[i][j]`` holds when ground events ``0..i`` are realized by exactly
    the first ``j`` candidate events. Returns the smallest feasible ``j``
    for the full ground sequence (trailing candidate events are free) and,
    when requested, a parent table for witness reconstruction.
    """
    m, n = len(labels), len(mapped)
    ok = [[False] * (n + 1) for _ in range(m + 1)]
    parent: list[list[int]] | None = (
        [[0] * (n + 1) for _ in range(m + 1)] if want_witness else None
    )
    ok[0][0] = True
    for i in range(1, m + 1):
        lab = labels[i - 1]
        temp = temporal[i - 1]
        row = ok[i]
        prev = ok[i - 1]
        for j in range(0, n + 1):
            if temp and prev[j]:
                row[j] = True
                if parent is not None:
                    parent[i][j] = 1  # empty temporal block
                continue
            if j > 0 and mapped[j - 1] == lab and (prev[j - 1] or row[j - 1]):
                row[j] = True
                if parent is not None:
                    parent[i][j] = 2 if prev[j - 1] else 3  # start / extend block
    for j in range(n + 1):
        if ok[m][j]:
            return j, parent
    return None, parent


def _reconstruct_blocks(
    parent: list[list[int]], m: int, j_end: int
) -> list[tuple[int, int]]:
    """Walk the parent table back into per-ground-event kept-index ranges."""
    blocks: list[tuple[int, int]] = []
    i, j = m, j_end
    end = j
    while i > 0:
        move = parent[i][j]
        if move == 1:  # empty temporal block sits at the current position
            blocks.append((j, j))
            i -= 1
            end = j
        elif move == 2:  # block for event i starts at j-1
            blocks.append((j - 1, end))
            i -= 1
            j -= 1
            end = j
        else:  # move == 3: extend block leftwards
            j -= 1
    blocks.reverse()
    return blocks


def strict_match(
    gb: Behavior,
    cb: Behavior,
    align: EventAlignment,
    ground: PetriNet,
    candidate: PetriNet,
    *,
    _gctx: GroundContext | None = None,
    _cctx: CandidateContext | None = None,
) -> MatchResult:
    """Strict event equivalence plus end-state legal equivalence."""
    gctx = _gctx or GroundContext(gb, ground)
    cctx = _cctx or CandidateContext(cb, align)

    witness: Witness | None = None
    if cctx.mapped_full == gctx.labels and not cctx.has_unmapped:
        # Exact realization: every ground event answered one-for-one.
        witness = _one_to_one_witness(gctx, cctx)
    else:
        j_end, parent = _factor(gctx.labels, gctx.temporal, cctx.mapped_full, True)
        if j_end is None:
            need = gctx.nontemporal_need
            have = cctx.have
            if any(have[lab] < count for lab, count in need.items()):
                return _fail(REASON_MISSING)
            if cctx.has_unmapped:
                retry, _ = _factor(gctx.labels, gctx.temporal, cctx.mapped_only, False)
                if retry is not None:
                    return _fail(REASON_EXTRA_MID)
            return _fail(REASON_ORDER)
        blocks = _reconstruct_blocks(parent, len(gctx.labels), j_end)
        witness = tuple(
            (i, cctx.orig_span(a, b)) for i, (a, b) in enumerate(blocks)
        )

    if not legal_equivalent(
        gctx.final_state, cctx.final_marking, candidate, align, gctx.exempt_full
    ):
        return _fail(REASON_STATE)
    return _ok(witness)


def covering_match(
    gb: Behavior,
    cb: Behavior,
    align: EventAlignment,
    ground: PetriNet,
    candidate: PetriNet,
    *,
    _gctx: GroundContext | None = None,
    _cctx: CandidateContext | None = None,
) -> MatchResult:
    """Non-strict equivalence: terminal legal states must agree; event
    realization may be partial, so the witness is best-effort."""
    gctx = _gctx or GroundContext(gb, ground)
    cctx = _cctx or CandidateContext(cb, align)
    if not legal_equivalent(
        gctx.final_state, cctx.final_marking, candidate, align, gctx.exempt_full
    ):
        return _fail(REASON_STATE)
    if cctx.mapped_full == gctx.labels:
        return _ok(_one_to_one_witness(gctx, cctx))
    # Greedy order-preserving partial realization, for audit only.
    witness: list[tuple[int, tuple[int, int]]] = []
    cursor = 0
    kept = cctx.kept
    for gi, lab in enumerate(gctx.labels):
        j = cursor
        while j < len(kept) and kept[j][2] != lab:
            j += 1
        if j == len(kept):
            continue
        end = j
        while end < len(kept) and kept[end][2] == lab:
            end += 1
        witness.append((gi, cctx.orig_span(j, end)))
        cursor = end
    return _ok(tuple(witness))


def embedding_match(
    cb: Behavior,
    gb: Behavior,
    align: EventAlignment,
    ground: PetriNet,
    candidate: PetriNet,
    *,
    _gctx: GroundContext | None = None,
    _cctx: CandidateContext | None = None,
) -> MatchResult:
    """Candidate-into-ground embedding with intermediate-state equivalence.

    Note the argument order: the candidate behavior comes first because the
    candidate side drives this relation.
    """
    gctx = _gctx or GroundContext(gb, ground)
    cctx = _cctx or CandidateContext(cb, align)
    if cctx.has_unmapped:
        return _fail(REASON_UNMAPPED)

    if cctx.mapped_full == gctx.labels and legal_equivalent(
        gctx.final_state, cctx.final_marking, candidate, align, gctx.exempt_full
    ):
        # Exact realization embeds at the ground terminal; other anchors
        # are only worth trying when this one fails.
        return _ok(_one_to_one_witness(gctx, cctx))

    runs = cctx.runs
    if not runs:
        exempt = gctx.exempt_after(0)
        if legal_equivalent(
            gctx.state_after(0), cctx.final_marking, candidate, align, exempt
        ):
            return _ok(())
        return _fail(REASON_STATE)

    glabels = gctx.labels
    positions: list[int] = []
    gi = 0
    for lab, _, _ in runs[:-1]:
        while gi < len(glabels) and glabels[gi] != lab:
            gi += 1
        if gi == len(glabels):
            return _fail(REASON_ORDER)
        positions.append(gi)
        gi += 1
    last_label = runs[-1][0]
    anchors = [k for k in range(gi, len(glabels)) if glabels[k] == last_label]
    if not anchors:
        return _fail(REASON_ORDER)
    for k in anchors:
        exempt = gctx.exempt_after(k + 1)
        if legal_equivalent(
            gctx.state_after(k + 1), cctx.final_marking, candidate, align, exempt
        ):
            witness = tuple(
                (pos, cctx.orig_span(runs[r][1], runs[r][2]))
                for r, pos in enumerate(positions)
            ) + ((k, cctx.orig_span(runs[-1][1], runs[-1][2])),)
            return _ok(witness)
    return _fail(REASON_STATE)


def mapped_sequence(behavior: Behavior, align: EventAlignment) -> tuple[EventLabel, ...]:
    """Ground-label sequence of a candidate behavior (irrelevant and
    unmapped events dropped)."""
    out = []
    for event in behavior.events:
        if event.label in align.irrelevant:
            continue
        mapped = align.map_label(event.label)
        if mapped is not None:
            out.append(mapped)
    return tuple(out)


def _contains(seq: Sequence[EventLabel], needle: Sequence[EventLabel]) -> bool:
    n = len(needle)
    if n == 0 or n > len(seq):
        return False
    for i in range(len(seq) - n + 1):
        if tuple(seq[i : i + n]) == tuple(needle):
            return True
    return False


def pruned_indices(behaviors: BehaviorSet, align: EventAlignment) -> frozenset[int]:
    """Indices of behaviors whose mapped sequence contains an illegal
    ground-event subsequence (contiguously)."""
    if not align.illegal_sequences:
        return frozenset()
    out = set()
    for idx, behavior in enumerate(behaviors):
        seq = mapped_sequence(behavior, align)
        if any(_contains(seq, bad) for bad in align.illegal_sequences):
            out.add(idx)
    return frozenset(out)


def prune_illegal(
    behaviors: BehaviorSet, align: EventAlignment
) -> tuple[BehaviorSet, BehaviorSet]:
    """Split a behavior set into (kept, pruned) by the illegal sequences."""
    pruned = pruned_indices(behaviors, align)
    kept_list = tuple(b for i, b in enumerate(behaviors) if i not in pruned)
    pruned_list = tuple(b for i, b in enumerate(behaviors) if i in pruned)
    return (
        BehaviorSet(kept_list, behaviors.source_net),
        BehaviorSet(pruned_list, behaviors.source_net),
    )
