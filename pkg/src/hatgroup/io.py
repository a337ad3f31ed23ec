"""Versioned JSON documents: patches, cotilers, rule sets and reports."""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from typing import Any

from .group import GammaElement

SCHEMA_VERSION = 1
KINDS = ("patch", "cotiler", "ruleset", "report")


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class Document:
    kind: str
    payload: Any
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown document kind {self.kind!r}")

    def to_json(self) -> dict:
        return {"schema_version": self.schema_version, "kind": self.kind, "payload": self.payload}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, indent=1, sort_keys=True) + "\n"


def parse(text: str) -> Document:
    if not text.strip():
        raise SchemaError("empty document")
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"not JSON: {e}") from None
    if not isinstance(d, dict) or set(d) != {"schema_version", "kind", "payload"}:
        raise SchemaError("expected an object with schema_version, kind and payload")
    if d["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {d['schema_version']!r}")
    return Document(d["kind"], d["payload"], d["schema_version"])


def emit(doc: Document) -> str:
    return doc.dumps()


def read_document(path) -> Document:
    if path in (None, "-"):
        return parse(sys.stdin.read())
    with open(path, encoding="utf-8") as f:
        return parse(f.read())


def write_document(doc: Document, path=None):
    text = doc.dumps()
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


# placements are (GammaElement, tile name) pairs

def element_json(g: GammaElement) -> list:
    return list(g.astuple())


def element_from_json(v) -> GammaElement:
    if not (isinstance(v, list) and len(v) == 4 and all(isinstance(x, int) for x in v)):
        raise SchemaError(f"bad group element {v!r}")
    tx, ty, rot, flip = v
    if not (0 <= rot < 6 and flip in (0, 1)):
        raise SchemaError(f"bad group element {v!r}")
    return GammaElement(tx, ty, rot, flip)


def placements_json(placements) -> list:
    return [[element_json(g), name] for g, name in sorted(placements)]


def placements_from_json(v) -> frozenset:
    if not isinstance(v, list):
        raise SchemaError("placements must be a list")
    out = []
    for item in v:
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[1], str)):
            raise SchemaError(f"bad placement {item!r}")
        out.append((element_from_json(item[0]), item[1]))
    if len(set(out)) != len(out):
        raise SchemaError("duplicate placement")
    return frozenset(out)


def patch_document(placements, kind: str = "patch", **extra) -> Document:
    payload = {"placements": placements_json(placements)}
    payload.update(extra)
    return Document(kind, payload)


def placements_of(doc: Document) -> frozenset:
    if doc.kind not in ("patch", "cotiler"):
        raise SchemaError(f"expected a patch or cotiler, got {doc.kind}")
    if not isinstance(doc.payload, dict) or "placements" not in doc.payload:
        raise SchemaError("payload has no placements")
    return placements_from_json(doc.payload["placements"])
