"""Fixture library access.

Fixtures live in the repository-level ``corpus/`` tree next to a
``manifest.json`` that records expectations (behavior counts, structural
counts, metric values) plus a provenance marker per fixture. Some manifest
entries are reserved name slots for nets that must be encoded from an
external dataset; loading those raises UnknownFixture.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .alignment import EventAlignment
from .diagnostics import ContractCheckError
from .formats import parse_alignment, parse_net
from .petri import PetriNet, require_valid

ENV_CORPUS = "CONTRACTCHECK_CORPUS"


class CorpusNotFound(ContractCheckError):
    pass


class UnknownFixture(ContractCheckError):
    pass


@dataclass(frozen=True)
class Fixture:
    name: str
    net: PetriNet
    alignment: EventAlignment | None
    ground: str | None
    expect: dict
    provenance: str


def corpus_root() -> Path:
    """Locate the corpus tree: env override, then package ancestors, then cwd."""
    override = os.environ.get(ENV_CORPUS)
    if override:
        root = Path(override)
        if (root / "manifest.json").is_file():
            return root
        raise CorpusNotFound(f"{ENV_CORPUS}={override} has no manifest.json")
    here = Path(__file__).resolve()
    for ancestor in here.parents:
        candidate = ancestor / "corpus"
        if (candidate / "manifest.json").is_file():
            return candidate
    candidate = Path.cwd() / "corpus"
    if (candidate / "manifest.json").is_file():
        return candidate
    raise CorpusNotFound("no corpus/manifest.json found")


def manifest() -> dict:
    root = corpus_root()
    with open(root / "manifest.json", encoding="utf-8") as handle:
        return json.load(handle)


def list_fixtures(*, include_reserved: bool = False) -> tuple[str, ...]:
    entries = manifest()["fixtures"]
    names = [
        name
        for name, entry in entries.items()
        if include_reserved or entry.get("status", "available") == "available"
    ]
    return tuple(sorted(names))


def load_fixture(name: str) -> Fixture:
    """Load, parse, and structurally validate one fixture."""
    entries = manifest()["fixtures"]
    entry = entries.get(name)
    if entry is None:
        raise UnknownFixture(f"no fixture named '{name}'")
    if entry.get("status", "available") != "available":
        raise UnknownFixture(
            f"fixture '{name}' is a reserved slot: {entry.get('note', 'not yet encoded')}"
        )
    root = corpus_root()
    net = parse_net((root / entry["net"]).read_text(encoding="utf-8"))
    require_valid(net)
    alignment = None
    if "align" in entry:
        alignment = parse_alignment((root / entry["align"]).read_text(encoding="utf-8"))
    return Fixture(
        name=name,
        net=net,
        alignment=alignment,
        ground=entry.get("ground"),
        expect=dict(entry.get("expect", {})),
        provenance=entry.get("provenance", "construction"),
    )
