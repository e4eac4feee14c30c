"""Behavior matching relations: strict, covering, embedding, pruning."""

from __future__ import annotations

import time

from contractcheck import (
    BehaviorSet,
    EventAlignment,
    build_reachability_graph,
    covering_match,
    embedding_match,
    enumerate_behaviors,
    identity_alignment,
    prune_illegal,
    strict_match,
)
from contractcheck.matching import (
    REASON_EXTRA_MID,
    REASON_MISSING,
    REASON_ORDER,
    REASON_STATE,
    REASON_UNMAPPED,
)

from conftest import chain_net, label


def behaviors_of(net):
    rg = build_reachability_graph(net)
    return enumerate_behaviors(rg)


GROUND3 = chain_net("g3", [label("g", "e1"), label("g", "e2"), label("g", "e3")])
GB3 = behaviors_of(GROUND3)[0]


def cand_chain(name, labels):
    net = chain_net(name, labels)
    return net, behaviors_of(net)[0]


def align_for(pairs, irrelevant=(), illegal=()):
    return EventAlignment.from_maps(
        "test", dict(pairs), irrelevant, {}, illegal
    )


class TestStrict:
    def test_one_to_many_blocks(self):
        ground = chain_net("g2", [label("g", "e1"), label("g", "e2")])
        gb = behaviors_of(ground)[0]
        cand, cb = cand_chain(
            "c3", [label("c", "a1"), label("c", "a2"), label("c", "b")]
        )
        align = align_for([
            (label("c", "a1"), label("g", "e1")),
            (label("c", "a2"), label("g", "e1")),
            (label("c", "b"), label("g", "e2")),
        ])
        result = strict_match(gb, cb, align, ground, cand)
        assert result.matched
        assert result.witness_dict() == {0: (0, 2), 1: (2, 3)}

    def test_temporal_ground_event_needs_no_block(self):
        ground = chain_net(
            "gt", [label("g", "e1"), label("time", "deadline"), label("g", "e2")],
            temporal_at={1},
        )
        gb = behaviors_of(ground)[0]
        cand, cb = cand_chain("c2", [label("c", "x"), label("c", "y")])
        align = align_for([
            (label("c", "x"), label("g", "e1")),
            (label("c", "y"), label("g", "e2")),
        ])
        result = strict_match(gb, cb, align, ground, cand)
        assert result.matched
        assert result.witness_dict()[1] == (1, 1)

    def test_order_violation(self):
        cand, cb = cand_chain("swap", [label("c", "two"), label("c", "one")])
        align = align_for([
            (label("c", "one"), label("g", "e1")),
            (label("c", "two"), label("g", "e2")),
        ])
        ground2 = chain_net("g2", [label("g", "e1"), label("g", "e2")])
        gb = behaviors_of(ground2)[0]
        result = strict_match(gb, cb, align, ground2, cand)
        assert not result.matched
        assert result.reason == REASON_ORDER

    def test_missing_event(self):
        cand, cb = cand_chain("short", [label("c", "one")])
        align = align_for([(label("c", "one"), label("g", "e1"))])
        result = strict_match(GB3, cb, align, GROUND3, cand)
        assert not result.matched
        assert result.reason == REASON_MISSING

    def test_mid_sequence_unmapped_event_fails_strict(self):
        cand, cb = cand_chain(
            "noisy", [label("c", "one"), label("c", "junk"), label("c", "two"),
                      label("c", "three")]
        )
        align = align_for([
            (label("c", "one"), label("g", "e1")),
            (label("c", "two"), label("g", "e2")),
            (label("c", "three"), label("g", "e3")),
        ])
        result = strict_match(GB3, cb, align, GROUND3, cand)
        assert not result.matched
        assert result.reason == REASON_EXTRA_MID

    def test_irrelevant_events_are_dropped_before_matching(self):
        cand, cb = cand_chain(
            "logged", [label("c", "one"), label("c", "log"), label("c", "two"),
                       label("c", "three")]
        )
        align = align_for(
            [
                (label("c", "one"), label("g", "e1")),
                (label("c", "two"), label("g", "e2")),
                (label("c", "three"), label("g", "e3")),
            ],
            irrelevant={label("c", "log")},
        )
        assert strict_match(GB3, cb, align, GROUND3, cand).matched

    def test_trailing_extras_allowed(self):
        cand, cb = cand_chain(
            "extra", [label("c", "one"), label("c", "two"), label("c", "three"),
                      label("c", "cleanup")]
        )
        align = align_for([
            (label("c", "one"), label("g", "e1")),
            (label("c", "two"), label("g", "e2")),
            (label("c", "three"), label("g", "e3")),
        ])
        assert strict_match(GB3, cb, align, GROUND3, cand).matched

    def test_trailing_extra_causing_legal_deviation_fails(self):
        from contractcheck import Arc, PetriNet, Place, Transition

        ground = PetriNet(
            "g_legal",
            places=(Place("s", 1), Place("P_Ok", 1, "power")),
            transitions=(Transition("t1", label("g", "e1")),),
            arcs=(Arc("normal", "s", "t1"),),
        )
        gb = behaviors_of(ground)[0]
        candidate = PetriNet(
            "c_devious",
            places=(Place("cs", 1), Place("c_ok", 1), Place("mid")),
            transitions=(
                Transition("c1", label("c", "one")),
                Transition("c2", label("c", "drop")),
            ),
            arcs=(
                Arc("normal", "cs", "c1"), Arc("normal", "c1", "mid"),
                Arc("normal", "mid", "c2"), Arc("normal", "c_ok", "c2"),
            ),
        )
        cb = behaviors_of(candidate)[0]
        align = EventAlignment.from_maps(
            "x",
            {label("c", "one"): label("g", "e1")},
            legal_map={"c_ok": "P_Ok"},
        )
        result = strict_match(gb, cb, align, ground, candidate)
        assert not result.matched
        assert result.reason == REASON_STATE


class TestCovering:
    def test_strict_implies_covering(self):
        net = GROUND3
        align = identity_alignment(net)
        gb = GB3
        assert strict_match(gb, gb, align, net, net).matched
        assert covering_match(gb, gb, align, net, net).matched

    def test_reordered_events_still_covered(self):
        ground = chain_net("gr", [label("g", "e1"), label("g", "e2")])
        gb = behaviors_of(ground)[0]
        cand, cb = cand_chain("rev", [label("c", "two"), label("c", "one")])
        align = align_for([
            (label("c", "one"), label("g", "e1")),
            (label("c", "two"), label("g", "e2")),
        ])
        assert not strict_match(gb, cb, align, ground, cand).matched
        assert covering_match(gb, cb, align, ground, cand).matched

    def test_missing_terminal_position_fails(self):
        from contractcheck import Arc, PetriNet, Place, Transition

        ground = PetriNet(
            "g_pauses",
            places=(Place("s", 1), Place("P_Paused", 0, "power")),
            transitions=(Transition("t", label("g", "pause")),),
            arcs=(Arc("normal", "s", "t"), Arc("normal", "t", "P_Paused")),
        )
        gb = behaviors_of(ground)[0]
        cand, cb = cand_chain("np", [label("c", "noop")])
        align = align_for([(label("c", "noop"), label("g", "pause"))])
        result = covering_match(gb, cb, align, ground, cand)
        assert not result.matched
        assert result.reason == REASON_STATE


class TestEmbedding:
    def test_prefix_embeds_with_intermediate_state(self):
        cand, cb = cand_chain("c1", [label("c", "one")])
        align = align_for([(label("c", "one"), label("g", "e1"))])
        result = embedding_match(cb, GB3, align, GROUND3, cand)
        assert result.matched
        assert result.witness_dict() == {0: (0, 1)}

    def test_unmapped_event_fails(self):
        cand, cb = cand_chain("cu", [label("c", "rogue")])
        align = align_for([])
        result = embedding_match(cb, GB3, align, GROUND3, cand)
        assert not result.matched
        assert result.reason == REASON_UNMAPPED

    def test_identical_behavior_embeds(self):
        align = identity_alignment(GROUND3)
        assert embedding_match(GB3, GB3, align, GROUND3, GROUND3).matched

    def test_consecutive_duplicates_collapse(self):
        cand, cb = cand_chain(
            "dup", [label("c", "one"), label("c", "one2"), label("c", "two")]
        )
        align = align_for([
            (label("c", "one"), label("g", "e1")),
            (label("c", "one2"), label("g", "e1")),
            (label("c", "two"), label("g", "e2")),
        ])
        result = embedding_match(cb, GB3, align, GROUND3, cand)
        assert result.matched
        assert result.witness_dict() == {0: (0, 2), 1: (2, 3)}

    def test_out_of_order_fails(self):
        cand, cb = cand_chain("oo", [label("c", "three"), label("c", "one")])
        align = align_for([
            (label("c", "one"), label("g", "e1")),
            (label("c", "three"), label("g", "e3")),
        ])
        result = embedding_match(cb, GB3, align, GROUND3, cand)
        assert not result.matched
        assert result.reason == REASON_ORDER


class TestPrune:
    def prune_setup(self):
        net = chain_net("pr", [label("g", "issue"), label("g", "redeem")])
        behaviors = behaviors_of(net)
        return net, behaviors

    def test_contiguous_illegal_subsequence_pruned(self):
        net, behaviors = self.prune_setup()
        align = EventAlignment.from_maps(
            "p",
            {lab: lab for lab in net.labels},
            illegal_sequences=[(label("g", "issue"), label("g", "redeem"))],
        )
        kept, pruned = prune_illegal(behaviors, align)
        assert len(kept) == 0
        assert len(pruned) == 1

    def test_empty_illegal_list_keeps_everything(self):
        net, behaviors = self.prune_setup()
        align = identity_alignment(net)
        kept, pruned = prune_illegal(behaviors, align)
        assert list(kept) == list(behaviors)
        assert len(pruned) == 0

    def test_non_contiguous_occurrence_not_pruned(self):
        net = chain_net(
            "pr3", [label("g", "issue"), label("g", "audit"), label("g", "redeem")]
        )
        behaviors = behaviors_of(net)
        align = EventAlignment.from_maps(
            "p",
            {lab: lab for lab in net.labels},
            illegal_sequences=[(label("g", "issue"), label("g", "redeem"))],
        )
        kept, pruned = prune_illegal(behaviors, align)
        assert len(kept) == 1 and len(pruned) == 0


class TestPerformance:
    def test_strict_match_linear_chain_100_events(self):
        labels = [label("g", f"e{i}") for i in range(100)]
        ground = chain_net("long", labels)
        gb = behaviors_of(ground)[0]
        align = identity_alignment(ground)
        start = time.perf_counter()
        result = strict_match(gb, gb, align, ground, ground)
        elapsed = time.perf_counter() - start
        assert result.matched
        assert elapsed < 0.5

    def test_strict_match_dp_no_blowup_under_renaming(self):
        # Force the DP path (no exact fast path) with a one-to-many split.
        labels = [label("g", f"e{i}") for i in range(100)]
        ground = chain_net("longg", labels)
        gb = behaviors_of(ground)[0]
        cand_labels = [label("c", f"x{i}") for i in range(100)]
        cand = chain_net("longc", cand_labels)
        cb = behaviors_of(cand)[0]
        align = align_for([(c, g) for c, g in zip(cand_labels, labels)])
        start = time.perf_counter()
        result = strict_match(gb, cb, align, ground, cand)
        elapsed = time.perf_counter() - start
        assert result.matched
        assert elapsed < 0.5
