"""Compliance metrics over behavior sets, and the end-to-end comparison.

* fitness   = strictly matched ground behaviors / all ground behaviors
* precision = embedded candidate behaviors / all candidate behaviors
* fes       = covered ground behaviors / all ground behaviors

Many candidate behaviors matching one ground behavior count once. Ratios
are kept exact as integer pairs and rendered with half-up rounding.
Pruned candidate behaviors never match; by default they still count in
the precision denominator.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from decimal import ROUND_HALF_UP, Decimal

from ._version import __version__
from .alignment import (
    EventAlignment,
    InvalidAlignment,
    validate_alignment,
)
from .diagnostics import (
    SEVERITY_WARNING,
    ContractCheckError,
    Diagnostic,
    errors_of,
)
from .matching import (
    CandidateContext,
    GroundContext,
    MatchResult,
    covering_match,
    embedding_match,
    pruned_indices,
    strict_match,
)
from .petri import PetriNet, require_valid
from .reachability import (
    DEFAULT_LIMITS,
    Behavior,
    BehaviorSet,
    ExplorationLimits,
    build_reachability_graph,
    enumerate_behaviors,
)


class EmptyGroundSet(ContractCheckError):
    """The ground-truth net produced no behaviors; that is a modeling fault."""


class EmptyCandidateSet(ContractCheckError):
    """The candidate net produced no behaviors."""


def round_ratio(value: Fraction, digits: int = 2) -> str:
    """Render a ratio with half-up rounding (12/28 -> '0.43')."""
    quantum = Decimal(1).scaleb(-digits)
    dec = Decimal(value.numerator) / Decimal(value.denominator)
    return str(dec.quantize(quantum, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class MetricScore:
    """An exact ratio plus the per-behavior match assignments.

    ``matches[i]`` is ``(other_index, MatchResult)`` for the first matching
    partner of behavior ``i`` in deterministic scan order, or ``None``.
    """

    numerator: int
    denominator: int
    matches: tuple[tuple[int, MatchResult] | None, ...]

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def rendered(self, digits: int = 2) -> str:
        return round_ratio(self.value, digits)


@dataclass(frozen=True)
class MetricsTriple:
    fitness: MetricScore
    precision: MetricScore
    fes: MetricScore

    def __post_init__(self):
        for score in (self.fitness, self.precision, self.fes):
            if not 0 <= score.value <= 1:
                raise ValueError("metric outside [0, 1]")
        if self.fitness.value > self.fes.value:
            raise ValueError("fitness exceeded fes; matcher invariant broken")


@dataclass(frozen=True)
class GroundRecord:
    index: int
    behavior: Behavior
    strict: tuple[int, MatchResult] | None
    covering: tuple[int, MatchResult] | None


@dataclass(frozen=True)
class CandidateRecord:
    index: int
    behavior: Behavior
    pruned: bool
    embedding: tuple[int, MatchResult] | None


@dataclass
class ComplianceReport:
    """Everything compare() learned, in canonical order.

    Serialization lives in contractcheck.formats; the report itself is an
    in-memory value whose only non-deterministic field is the timestamp.
    """

    ground_name: str
    candidate_name: str
    alignment_name: str
    limits: ExplorationLimits
    metrics: MetricsTriple
    ground_records: tuple[GroundRecord, ...]
    candidate_records: tuple[CandidateRecord, ...]
    diagnostics: tuple[Diagnostic, ...]
    options: dict
    generated_at: str
    tool_version: str = __version__
    schema_version: int = 1

    @cached_property
    def counts(self) -> dict[str, int]:
        pruned = sum(1 for r in self.candidate_records if r.pruned)
        return {
            "ground_total": len(self.ground_records),
            "candidate_total": len(self.candidate_records),
            "ground_strictly_matched": self.metrics.fitness.numerator,
            "ground_covered": self.metrics.fes.numerator,
            "candidate_embedded": self.metrics.precision.numerator,
            "pruned": pruned,
            "comparisons_saved": 3 * len(self.ground_records) * pruned,
        }

    @property
    def unmatched_candidates(self) -> tuple[int, ...]:
        return tuple(
            r.index for r in self.candidate_records if r.embedding is None
        )


def _ground_contexts(r: BehaviorSet, ground: PetriNet) -> list[GroundContext]:
    return [GroundContext(b, ground) for b in r]


def _candidate_contexts(q: BehaviorSet, align: EventAlignment) -> list[CandidateContext]:
    return [CandidateContext(b, align) for b in q]


def _scan_order(preferred: list[int], total: int, skip: frozenset[int]):
    seen = set()
    for idx in preferred:
        if idx not in seen and idx not in skip:
            seen.add(idx)
            yield idx
    for idx in range(total):
        if idx not in seen and idx not in skip:
            yield idx


def fitness(
    r: BehaviorSet,
    q: BehaviorSet,
    align: EventAlignment,
    ground: PetriNet,
    candidate: PetriNet,
    *,
    excluded: frozenset[int] = frozenset(),
    _gctxs: list[GroundContext] | None = None,
    _cctxs: list[CandidateContext] | None = None,
) -> MetricScore:
    """Share of ground behaviors with at least one strict match."""
    if len(r) == 0:
        raise EmptyGroundSet(f"ground net '{ground.name}' has no behaviors")
    gctxs = _gctxs if _gctxs is not None else _ground_contexts(r, ground)
    cctxs = _cctxs if _cctxs is not None else _candidate_contexts(q, align)
    by_sequence: dict[tuple, list[int]] = {}
    for idx, cctx in enumerate(cctxs):
        by_sequence.setdefault(cctx.mapped_full, []).append(idx)
    matches: list[tuple[int, MatchResult] | None] = []
    for gi, gctx in enumerate(gctxs):
        found = None
        preferred = by_sequence.get(gctx.labels, [])
        for ci in _scan_order(preferred, len(cctxs), excluded):
            result = strict_match(
                r[gi], q[ci], align, ground, candidate,
                _gctx=gctx, _cctx=cctxs[ci],
            )
            if result.matched:
                found = (ci, result)
                break
        matches.append(found)
    return MetricScore(
        numerator=sum(1 for m in matches if m is not None),
        denominator=len(r),
        matches=tuple(matches),
    )


def fes(
    r: BehaviorSet,
    q: BehaviorSet,
    align: EventAlignment,
    ground: PetriNet,
    candidate: PetriNet,
    *,
    excluded: frozenset[int] = frozenset(),
    _gctxs: list[GroundContext] | None = None,
    _cctxs: list[CandidateContext] | None = None,
) -> MetricScore:
    """Share of ground behaviors covered regardless of strict event matching."""
    if len(r) == 0:
        raise EmptyGroundSet(f"ground net '{ground.name}' has no behaviors")
    gctxs = _gctxs if _gctxs is not None else _ground_contexts(r, ground)
    cctxs = _cctxs if _cctxs is not None else _candidate_contexts(q, align)
    matches: list[tuple[int, MatchResult] | None] = []
    for gi, gctx in enumerate(gctxs):
        found = None
        for ci in _scan_order([], len(cctxs), excluded):
            result = covering_match(
                r[gi], q[ci], align, ground, candidate,
                _gctx=gctx, _cctx=cctxs[ci],
            )
            if result.matched:
                found = (ci, result)
                break
        matches.append(found)
    return MetricScore(
        numerator=sum(1 for m in matches if m is not None),
        denominator=len(r),
        matches=tuple(matches),
    )


def precision(
    r: BehaviorSet,
    q: BehaviorSet,
    align: EventAlignment,
    ground: PetriNet,
    candidate: PetriNet,
    *,
    pruned: frozenset[int] = frozenset(),
    include_pruned_in_total: bool = True,
    _gctxs: list[GroundContext] | None = None,
    _cctxs: list[CandidateContext] | None = None,
) -> MetricScore:
    """Share of candidate behaviors embeddable into some ground behavior."""
    if len(q) == 0:
        raise EmptyCandidateSet(f"candidate net '{candidate.name}' has no behaviors")
    gctxs = _gctxs if _gctxs is not None else _ground_contexts(r, ground)
    cctxs = _cctxs if _cctxs is not None else _candidate_contexts(q, align)
    by_labels: dict[tuple, list[int]] = {}
    for idx, gctx in enumerate(gctxs):
        by_labels.setdefault(gctx.labels, []).append(idx)
    matches: list[tuple[int, MatchResult] | None] = []
    for ci, cctx in enumerate(cctxs):
        if ci in pruned:
            matches.append(None)
            continue
        found = None
        preferred = by_labels.get(cctx.mapped_full, [])
        for gi in _scan_order(preferred, len(gctxs), frozenset()):
            result = embedding_match(
                q[ci], r[gi], align, ground, candidate,
                _gctx=gctxs[gi], _cctx=cctx,
            )
            if result.matched:
                found = (gi, result)
                break
        matches.append(found)
    denominator = len(q) if include_pruned_in_total else len(q) - len(pruned)
    if denominator == 0:
        raise EmptyCandidateSet(
            f"candidate net '{candidate.name}' has no behaviors left after pruning"
        )
    return MetricScore(
        numerator=sum(1 for m in matches if m is not None),
        denominator=denominator,
        matches=tuple(matches),
    )


def compare(
    ground: PetriNet,
    candidate: PetriNet,
    align: EventAlignment,
    limits: ExplorationLimits = DEFAULT_LIMITS,
    *,
    prune: bool = True,
    include_pruned_in_total: bool = True,
    allow_no_terminal: bool = False,
) -> ComplianceReport:
    """Full pipeline: validate, explore, enumerate, prune, score, report."""
    require_valid(ground)
    require_valid(candidate)
    align_diags = validate_alignment(align, ground, candidate)
    problems = errors_of(align_diags)
    if problems:
        raise InvalidAlignment(align.name, problems)

    rg_ground = build_reachability_graph(ground, limits)
    rg_candidate = build_reachability_graph(candidate, limits)
    r = enumerate_behaviors(rg_ground, limits, allow_no_terminal=allow_no_terminal)
    q = enumerate_behaviors(rg_candidate, limits, allow_no_terminal=allow_no_terminal)
    if len(r) == 0:
        raise EmptyGroundSet(f"ground net '{ground.name}' has no behaviors")
    if len(q) == 0:
        raise EmptyCandidateSet(f"candidate net '{candidate.name}' has no behaviors")

    pruned = pruned_indices(q, align) if prune else frozenset()

    gctxs = _ground_contexts(r, ground)
    cctxs = _candidate_contexts(q, align)
    fit = fitness(r, q, align, ground, candidate, excluded=pruned,
                  _gctxs=gctxs, _cctxs=cctxs)
    cov = fes(r, q, align, ground, candidate, excluded=pruned,
              _gctxs=gctxs, _cctxs=cctxs)
    prec = precision(
        r, q, align, ground, candidate,
        pruned=pruned, include_pruned_in_total=include_pruned_in_total,
        _gctxs=gctxs, _cctxs=cctxs,
    )
    triple = MetricsTriple(fitness=fit, precision=prec, fes=cov)

    diagnostics = list(align_diags)
    if pruned:
        saved = 3 * len(r) * len(pruned)
        diagnostics.append(
            Diagnostic(
                "W_PRUNED_BEHAVIORS",
                SEVERITY_WARNING,
                f"pruned {len(pruned)} of {len(q)} candidate behaviors via illegal "
                f"sequences; skipped {saved} pairwise comparisons",
            )
        )

    ground_records = tuple(
        GroundRecord(i, r[i], fit.matches[i], cov.matches[i]) for i in range(len(r))
    )
    candidate_records = tuple(
        CandidateRecord(i, q[i], i in pruned, prec.matches[i]) for i in range(len(q))
    )
    return ComplianceReport(
        ground_name=ground.name,
        candidate_name=candidate.name,
        alignment_name=align.name,
        limits=limits,
        metrics=triple,
        ground_records=ground_records,
        candidate_records=candidate_records,
        diagnostics=tuple(diagnostics),
        options={
            "prune": prune,
            "include_pruned_in_total": include_pruned_in_total,
            "allow_no_terminal": allow_no_terminal,
        },
        generated_at=_dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
    )
