"""Text formats: .pnet nets, .align alignments, and report rendering.

Both grammars are line-oriented; ``#`` starts a comment, blank lines are
skipped. Serialization is canonical (elements sorted by id, LF endings),
so parse(serialize(x)) == x for every value.

.pnet lines::

    net "<name>"
    place <id> [tokens=<n>] [legal=power|obligation] [lcp]
    transition <id> actor=<id> action=<id> [temporal]
    arc <a> -> <b>      # direction inferred from element kinds
    arc <p> <-> <t>     # bidirectional
    arc <p> -o <t>      # inhibitor

.align lines::

    align "<name>"
    event <actor>:<action> => <actor>:<action>
    irrelevant <actor>:<action>
    legal <candidate-place> => <ground-place>
    illegal-seq <actor>:<action> [<actor>:<action> ...]

Reports render as versioned JSON (machine) or a one-row grid (human) with
columns FES, Fitness, Precision.
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET

from .alignment import EventAlignment
from .diagnostics import ContractCheckError
from .metrics import ComplianceReport
from .petri import (
    ARC_BIDIRECTIONAL,
    ARC_INHIBITOR,
    ARC_NORMAL,
    Arc,
    EventLabel,
    LEGAL_OBLIGATION,
    LEGAL_POWER,
    PetriNet,
    Place,
    Transition,
)

_ID_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_NET_RE = re.compile(r'^net\s+"([^"]+)"\s*$')
_ALIGN_RE = re.compile(r'^align\s+"([^"]+)"\s*$')


class ParseError(ContractCheckError):
    def __init__(self, code: str, message: str, line: int, column: int = 1):
        self.code = code
        self.line = line
        self.column = column
        super().__init__(f"line {line}, col {column}: {message} [{code}]")


def _lines(text: str):
    """Yield (line_no, content) with comments stripped and blanks skipped."""
    for no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            yield no, stripped


def _check_id(token: str, line: int, what: str) -> str:
    if not _ID_RE.match(token):
        raise ParseError("E_SYNTAX", f"bad {what} identifier '{token}'", line)
    return token


def _parse_label(token: str, line: int) -> EventLabel:
    if token.count(":") != 1:
        raise ParseError("E_SYNTAX", f"expected actor:action, got '{token}'", line)
    actor, action = token.split(":")
    _check_id(actor, line, "actor")
    _check_id(action, line, "action")
    return EventLabel(actor, action)


def parse_net(text: str) -> PetriNet:
    """Parse a .pnet document; raises ParseError with a position on failure."""
    name: str | None = None
    places: dict[str, Place] = {}
    transitions: dict[str, Transition] = {}
    arcs: list[Arc] = []

    for line_no, content in _lines(text):
        tokens = content.split()
        head = tokens[0]
        if head == "net":
            match = _NET_RE.match(content)
            if not match:
                raise ParseError("E_SYNTAX", 'expected: net "<name>"', line_no)
            if name is not None:
                raise ParseError("E_SYNTAX", "duplicate net header", line_no)
            name = match.group(1)
            continue
        if name is None:
            raise ParseError("E_SYNTAX", 'document must start with: net "<name>"', line_no)

        if head == "place":
            if len(tokens) < 2:
                raise ParseError("E_SYNTAX", "place needs an identifier", line_no)
            pid = _check_id(tokens[1], line_no, "place")
            if pid in places or pid in transitions:
                raise ParseError("E_DUP_ID", f"duplicate identifier '{pid}'", line_no)
            tokens_count = 0
            legal_kind = "none"
            is_lcp = False
            seen = set()
            for attr in tokens[2:]:
                if attr == "lcp":
                    key = "lcp"
                    if key in seen:
                        raise ParseError("E_SYNTAX", "repeated attribute 'lcp'", line_no)
                    is_lcp = True
                elif attr.startswith("tokens="):
                    key = "tokens"
                    if key in seen:
                        raise ParseError("E_SYNTAX", "repeated attribute 'tokens'", line_no)
                    value = attr.split("=", 1)[1]
                    if not value.isdigit():
                        raise ParseError("E_SYNTAX", f"tokens must be a non-negative integer, got '{value}'", line_no)
                    tokens_count = int(value)
                elif attr.startswith("legal="):
                    key = "legal"
                    if key in seen:
                        raise ParseError("E_SYNTAX", "repeated attribute 'legal'", line_no)
                    value = attr.split("=", 1)[1]
                    if value not in (LEGAL_POWER, LEGAL_OBLIGATION):
                        raise ParseError("E_SYNTAX", f"legal must be power or obligation, got '{value}'", line_no)
                    legal_kind = value
                else:
                    raise ParseError("E_SYNTAX", f"unknown place attribute '{attr}'", line_no)
                seen.add(key)
            places[pid] = Place(pid, tokens_count, legal_kind, is_lcp)
        elif head == "transition":
            if len(tokens) < 2:
                raise ParseError("E_SYNTAX", "transition needs an identifier", line_no)
            tid = _check_id(tokens[1], line_no, "transition")
            if tid in transitions or tid in places:
                raise ParseError("E_DUP_ID", f"duplicate identifier '{tid}'", line_no)
            actor = action = None
            temporal = False
            for attr in tokens[2:]:
                if attr == "temporal":
                    if temporal:
                        raise ParseError("E_SYNTAX", "repeated attribute 'temporal'", line_no)
                    temporal = True
                elif attr.startswith("actor="):
                    if actor is not None:
                        raise ParseError("E_SYNTAX", "repeated attribute 'actor'", line_no)
                    actor = _check_id(attr.split("=", 1)[1], line_no, "actor")
                elif attr.startswith("action="):
                    if action is not None:
                        raise ParseError("E_SYNTAX", "repeated attribute 'action'", line_no)
                    action = _check_id(attr.split("=", 1)[1], line_no, "action")
                else:
                    raise ParseError("E_SYNTAX", f"unknown transition attribute '{attr}'", line_no)
            if actor is None or action is None:
                raise ParseError("E_SYNTAX", "transition needs actor= and action=", line_no)
            transitions[tid] = Transition(tid, EventLabel(actor, action), temporal)
        elif head == "arc":
            if len(tokens) != 4:
                raise ParseError("E_SYNTAX", "expected: arc <a> <op> <b>", line_no)
            _, a, op, b = tokens
            _check_id(a, line_no, "arc endpoint")
            _check_id(b, line_no, "arc endpoint")
            a_kind = "place" if a in places else "transition" if a in transitions else None
            b_kind = "place" if b in places else "transition" if b in transitions else None
            if a_kind is None:
                raise ParseError("E_UNKNOWN_ID", f"unknown arc endpoint '{a}'", line_no)
            if b_kind is None:
                raise ParseError("E_UNKNOWN_ID", f"unknown arc endpoint '{b}'", line_no)
            if op == "->":
                if a_kind == b_kind:
                    raise ParseError(
                        "E_ARC_ENDPOINTS",
                        f"arc must connect a place and a transition, got {a_kind}->{b_kind}",
                        line_no,
                    )
                arcs.append(Arc(ARC_NORMAL, a, b))
            elif op in ("<->", "-o"):
                kind = ARC_BIDIRECTIONAL if op == "<->" else ARC_INHIBITOR
                if a_kind != "place" or b_kind != "transition":
                    raise ParseError(
                        "E_ARC_ENDPOINTS",
                        f"'{op}' arcs run from a place to a transition",
                        line_no,
                    )
                arcs.append(Arc(kind, a, b))
            else:
                raise ParseError("E_SYNTAX", f"unknown arc operator '{op}'", line_no)
        else:
            raise ParseError("E_SYNTAX", f"unknown directive '{head}'", line_no)

    if name is None:
        raise ParseError("E_SYNTAX", "missing net header", 1)
    return PetriNet(
        name,
        places=tuple(places.values()),
        transitions=tuple(transitions.values()),
        arcs=tuple(arcs),
    )


def serialize_net(net: PetriNet) -> str:
    lines = [f'net "{net.name}"']
    if net.places:
        lines.append("")
        for p in net.places:
            parts = [f"place {p.id}"]
            if p.initial_tokens:
                parts.append(f"tokens={p.initial_tokens}")
            if p.legal_kind != "none":
                parts.append(f"legal={p.legal_kind}")
            if p.is_lcp:
                parts.append("lcp")
            lines.append(" ".join(parts))
    if net.transitions:
        lines.append("")
        for t in net.transitions:
            parts = [f"transition {t.id} actor={t.label.actor} action={t.label.action}"]
            if t.temporal:
                parts.append("temporal")
            lines.append(" ".join(parts))
    if net.arcs:
        lines.append("")
        op = {ARC_NORMAL: "->", ARC_BIDIRECTIONAL: "<->", ARC_INHIBITOR: "-o"}
        for a in net.arcs:
            lines.append(f"arc {a.source} {op[a.kind]} {a.target}")
    return "\n".join(lines) + "\n"


def parse_alignment(text: str) -> EventAlignment:
    name: str | None = None
    event_pairs: list[tuple[EventLabel, EventLabel]] = []
    event_keys: set[EventLabel] = set()
    irrelevant: set[EventLabel] = set()
    legal_pairs: list[tuple[str, str]] = []
    legal_keys: set[str] = set()
    illegal: list[tuple[EventLabel, ...]] = []

    for line_no, content in _lines(text):
        tokens = content.split()
        head = tokens[0]
        if head == "align":
            match = _ALIGN_RE.match(content)
            if not match:
                raise ParseError("E_SYNTAX", 'expected: align "<name>"', line_no)
            if name is not None:
                raise ParseError("E_SYNTAX", "duplicate align header", line_no)
            name = match.group(1)
            continue
        if name is None:
            raise ParseError("E_SYNTAX", 'document must start with: align "<name>"', line_no)

        if head == "event":
            if len(tokens) != 4 or tokens[2] != "=>":
                raise ParseError("E_SYNTAX", "expected: event <a>:<b> => <c>:<d>", line_no)
            src = _parse_label(tokens[1], line_no)
            dst = _parse_label(tokens[3], line_no)
            if src in event_keys:
                raise ParseError("E_DUP_ID", f"duplicate event mapping for '{src}'", line_no)
            event_keys.add(src)
            event_pairs.append((src, dst))
        elif head == "irrelevant":
            if len(tokens) != 2:
                raise ParseError("E_SYNTAX", "expected: irrelevant <a>:<b>", line_no)
            label = _parse_label(tokens[1], line_no)
            if label in irrelevant:
                raise ParseError("E_DUP_ID", f"duplicate irrelevant entry '{label}'", line_no)
            irrelevant.add(label)
        elif head == "legal":
            if len(tokens) != 4 or tokens[2] != "=>":
                raise ParseError("E_SYNTAX", "expected: legal <place> => <place>", line_no)
            src = _check_id(tokens[1], line_no, "place")
            dst = _check_id(tokens[3], line_no, "place")
            if src in legal_keys:
                raise ParseError("E_DUP_ID", f"duplicate legal mapping for '{src}'", line_no)
            legal_keys.add(src)
            legal_pairs.append((src, dst))
        elif head == "illegal-seq":
            if len(tokens) < 2:
                raise ParseError("E_SYNTAX", "illegal-seq needs at least one event", line_no)
            seq = tuple(_parse_label(tok, line_no) for tok in tokens[1:])
            illegal.append(seq)
        else:
            raise ParseError("E_SYNTAX", f"unknown directive '{head}'", line_no)

    if name is None:
        raise ParseError("E_SYNTAX", "missing align header", 1)
    return EventAlignment(
        name=name,
        event_pairs=tuple(event_pairs),
        irrelevant=frozenset(irrelevant),
        legal_pairs=tuple(legal_pairs),
        illegal_sequences=tuple(illegal),
    )


def serialize_alignment(align: EventAlignment) -> str:
    lines = [f'align "{align.name}"']
    if align.event_pairs:
        lines.append("")
        for src, dst in align.event_pairs:
            lines.append(f"event {src} => {dst}")
    if align.irrelevant:
        lines.append("")
        for label in sorted(align.irrelevant):
            lines.append(f"irrelevant {label}")
    if align.legal_pairs:
        lines.append("")
        for src, dst in align.legal_pairs:
            lines.append(f"legal {src} => {dst}")
    if align.illegal_sequences:
        lines.append("")
        for seq in align.illegal_sequences:
            lines.append("illegal-seq " + " ".join(str(l) for l in seq))
    return "\n".join(lines) + "\n"


def _witness_json(pair) -> dict | None:
    if pair is None:
        return None
    index, result = pair
    return {
        "partner": index,
        "witness": {str(k): list(v) for k, v in (result.witness or ())},
    }


def _events_json(behavior) -> list[dict]:
    return [
        {
            "transition": e.transition,
            "event": str(e.label),
            "temporal": e.temporal,
        }
        for e in behavior.events
    ]


def report_to_dict(report: ComplianceReport, digits: int = 2) -> dict:
    m = report.metrics
    return {
        "schema_version": report.schema_version,
        "tool_version": report.tool_version,
        "generated_at": report.generated_at,
        "ground": {
            "net": report.ground_name,
            "behaviors": len(report.ground_records),
        },
        "candidate": {
            "net": report.candidate_name,
            "behaviors": len(report.candidate_records),
        },
        "alignment": report.alignment_name,
        "limits": {
            "max_states": report.limits.max_states,
            "max_paths": report.limits.max_paths,
            "max_depth": report.limits.max_depth,
        },
        "options": report.options,
        "metrics": {
            "fes": {
                "value": m.fes.rendered(digits),
                "numerator": m.fes.numerator,
                "denominator": m.fes.denominator,
            },
            "fitness": {
                "value": m.fitness.rendered(digits),
                "numerator": m.fitness.numerator,
                "denominator": m.fitness.denominator,
            },
            "precision": {
                "value": m.precision.rendered(digits),
                "numerator": m.precision.numerator,
                "denominator": m.precision.denominator,
            },
        },
        "counts": report.counts,
        "ground_behaviors": [
            {
                "index": rec.index,
                "events": _events_json(rec.behavior),
                "strict": _witness_json(rec.strict),
                "covering": _witness_json(rec.covering),
            }
            for rec in report.ground_records
        ],
        "candidate_behaviors": [
            {
                "index": rec.index,
                "events": _events_json(rec.behavior),
                "pruned": rec.pruned,
                "embedding": _witness_json(rec.embedding),
            }
            for rec in report.candidate_records
        ],
        "unmatched_candidates": list(report.unmatched_candidates),
        "diagnostics": [
            {"code": d.code, "severity": d.severity, "message": d.message}
            for d in report.diagnostics
        ],
    }


def render_table(report: ComplianceReport, digits: int = 2) -> str:
    m = report.metrics
    width = max(9, digits + 3)
    header = (
        f"{'candidate':<24}"
        f"{'FES':>{width}}  {'Fitness':>{width}}  {'Precision':>{width}}"
    )
    row = (
        f"{report.candidate_name:<24}"
        f"{m.fes.rendered(digits):>{width}}  "
        f"{m.fitness.rendered(digits):>{width}}  "
        f"{m.precision.rendered(digits):>{width}}"
    )
    return header + "\n" + row + "\n"


def serialize_report(report: ComplianceReport, fmt: str = "json", digits: int = 2) -> str:
    if fmt == "json":
        return json.dumps(report_to_dict(report, digits), indent=2) + "\n"
    if fmt == "table":
        return render_table(report, digits)
    raise ValueError(f"unknown report format '{fmt}'")


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1].lower()


_PNML_COLOR_TAGS = {"hlinitialmarking", "hlinscription", "declaration"}


def import_pnml(text: str) -> PetriNet:
    """Best-effort importer for a minimal PNML subset.

    Supports plain places/transitions/arcs with integer initial markings.
    Transition names must read ``actor:action``. Inhibitor arcs are
    recognized through an ``arctype``/``type`` child reading ``inhibitor``;
    colored-net constructs are rejected.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise ParseError("E_SYNTAX", f"not valid XML: {exc}", 1)

    net_el = None
    for el in root.iter():
        if _local(el.tag) == "net":
            net_el = el
            break
    if net_el is None:
        raise ParseError("E_SYNTAX", "no <net> element found", 1)
    name = net_el.get("id") or "pnml"

    places: list[Place] = []
    transitions: list[Transition] = []
    arcs: list[Arc] = []
    kind_of: dict[str, str] = {}

    def text_of(el, *path_locals) -> str | None:
        node = el
        for want in path_locals:
            node = next((c for c in node if _local(c.tag) == want), None)
            if node is None:
                return None
        return (node.text or "").strip()

    for el in net_el.iter():
        local = _local(el.tag)
        if local in _PNML_COLOR_TAGS:
            raise ParseError("E_UNSUPPORTED", f"colored-net construct <{local}> is not supported", 1)
        if local == "place":
            pid = el.get("id")
            if not pid:
                raise ParseError("E_SYNTAX", "place without id", 1)
            if pid in kind_of:
                raise ParseError("E_DUP_ID", f"duplicate identifier '{pid}'", 1)
            marking = text_of(el, "initialmarking", "text") or "0"
            if not marking.lstrip("-").isdigit() or int(marking) < 0:
                raise ParseError("E_SYNTAX", f"bad initial marking '{marking}' on '{pid}'", 1)
            places.append(Place(pid, int(marking)))
            kind_of[pid] = "place"
        elif local == "transition":
            tid = el.get("id")
            if not tid:
                raise ParseError("E_SYNTAX", "transition without id", 1)
            if tid in kind_of:
                raise ParseError("E_DUP_ID", f"duplicate identifier '{tid}'", 1)
            label_text = text_of(el, "name", "text") or tid
            if label_text.count(":") != 1:
                raise ParseError(
                    "E_SYNTAX",
                    f"transition '{tid}' name must read actor:action, got '{label_text}'",
                    1,
                )
            actor, action = label_text.split(":")
            transitions.append(Transition(tid, EventLabel(actor, action)))
            kind_of[tid] = "transition"

    for el in net_el.iter():
        if _local(el.tag) != "arc":
            continue
        src, tgt = el.get("source"), el.get("target")
        if not src or not tgt:
            raise ParseError("E_SYNTAX", "arc without source/target", 1)
        if src not in kind_of or tgt not in kind_of:
            raise ParseError("E_UNKNOWN_ID", f"arc references unknown element '{src}'->'{tgt}'", 1)
        arc_type = None
        for child in el:
            if _local(child.tag) in ("arctype", "type"):
                arc_type = (child.get("value") or (child.text or "")).strip() or text_of(child, "text")
        if arc_type and arc_type.lower() == "inhibitor":
            if kind_of[src] != "place" or kind_of[tgt] != "transition":
                raise ParseError("E_ARC_ENDPOINTS", "inhibitor arc must run place->transition", 1)
            arcs.append(Arc(ARC_INHIBITOR, src, tgt))
        elif arc_type:
            raise ParseError("E_UNSUPPORTED", f"arc type '{arc_type}' is not supported", 1)
        else:
            if kind_of[src] == kind_of[tgt]:
                raise ParseError("E_ARC_ENDPOINTS", "arc must connect a place and a transition", 1)
            arcs.append(Arc(ARC_NORMAL, src, tgt))

    return PetriNet(name, tuple(places), tuple(transitions), tuple(arcs))
