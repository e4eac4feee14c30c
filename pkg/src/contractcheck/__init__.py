"""contractcheck: Petri-net behavior comparison and compliance metrics.

Model a ground-truth contract and a candidate implementation as Petri
nets, enumerate their behaviors, relate them through an event/legal-place
alignment, and score fitness, precision, and functional equivalence.

Figure rendering lives in :mod:`contractcheck.figures` and is imported
lazily to keep matplotlib out of the core path.
"""

from ._version import __version__
from .alignment import (
    EventAlignment,
    InvalidAlignment,
    LegalState,
    identity_alignment,
    legal_equivalent,
    legal_state,
    temporal_exempt_positions,
    validate_alignment,
)
from .diagnostics import ContractCheckError, Diagnostic
from .formats import (
    ParseError,
    import_pnml,
    parse_alignment,
    parse_net,
    render_table,
    report_to_dict,
    serialize_alignment,
    serialize_net,
    serialize_report,
)
from .matching import (
    MatchResult,
    covering_match,
    embedding_match,
    prune_illegal,
    strict_match,
)
from .metrics import (
    ComplianceReport,
    EmptyCandidateSet,
    EmptyGroundSet,
    MetricScore,
    MetricsTriple,
    compare,
    fes,
    fitness,
    precision,
    round_ratio,
)
from .petri import (
    Arc,
    EventLabel,
    InvalidNet,
    Marking,
    NotEnabled,
    PetriNet,
    Place,
    Transition,
    UnknownPlace,
    enabled_transitions,
    fire,
    fire_sequence,
    insert_loop_controls,
    validate_net,
)
from .reachability import (
    Behavior,
    BehaviorEvent,
    BehaviorSet,
    DEFAULT_LIMITS,
    ExplorationLimits,
    NoTerminalMarkings,
    PathExplosion,
    ReachabilityGraph,
    StateExplosion,
    build_reachability_graph,
    enumerate_behaviors,
    find_dead_transitions,
)

__all__ = [
    "__version__",
    "Arc",
    "Behavior",
    "BehaviorEvent",
    "BehaviorSet",
    "ComplianceReport",
    "ContractCheckError",
    "DEFAULT_LIMITS",
    "Diagnostic",
    "EmptyCandidateSet",
    "EmptyGroundSet",
    "EventAlignment",
    "EventLabel",
    "ExplorationLimits",
    "InvalidAlignment",
    "InvalidNet",
    "LegalState",
    "Marking",
    "MatchResult",
    "MetricScore",
    "MetricsTriple",
    "NoTerminalMarkings",
    "NotEnabled",
    "ParseError",
    "PathExplosion",
    "PetriNet",
    "Place",
    "ReachabilityGraph",
    "StateExplosion",
    "Transition",
    "UnknownPlace",
    "build_reachability_graph",
    "compare",
    "covering_match",
    "embedding_match",
    "enabled_transitions",
    "enumerate_behaviors",
    "fes",
    "find_dead_transitions",
    "fire",
    "fire_sequence",
    "fitness",
    "identity_alignment",
    "import_pnml",
    "insert_loop_controls",
    "legal_equivalent",
    "legal_state",
    "parse_alignment",
    "parse_net",
    "precision",
    "prune_illegal",
    "render_table",
    "report_to_dict",
    "round_ratio",
    "serialize_alignment",
    "serialize_net",
    "serialize_report",
    "strict_match",
    "temporal_exempt_positions",
    "validate_alignment",
    "validate_net",
]
