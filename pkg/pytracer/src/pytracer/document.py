"""Emit raw flow-graph documents (schema version 1).

This module mirrors the shared document schema by construction; the
tracer stays independent of the enrichment toolchain and talks to it
only through these files.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

OUTER = "@outer"


@dataclass
class PortSpec:
    language: str
    package: str
    qualified_name: str

    def to_json(self) -> dict:
        return {
            "tag": "concrete",
            "language": self.language,
            "package": self.package,
            "qualified_name": self.qualified_name,
        }


def port_for_value(value) -> PortSpec:
    cls = type(value)
    return PortSpec("python", cls.__module__ or "builtins", cls.__qualname__)


@dataclass
class BoxSpec:
    id: str
    package: str
    qualified_name: str
    kind: str
    resolution_list: list[tuple[str, str]]
    in_ports: list[PortSpec] = field(default_factory=list)
    in_slots: list[str] = field(default_factory=list)
    out_ports: list[PortSpec] = field(default_factory=list)
    out_slots: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "label": {
                "tag": "concrete",
                "language": "python",
                "package": self.package,
                "qualified_name": self.qualified_name,
                "kind": self.kind,
                "resolution_list": [list(p) for p in self.resolution_list],
            },
            "in_ports": [p.to_json() for p in self.in_ports],
            "in_slots": list(self.in_slots),
            "out_ports": [p.to_json() for p in self.out_ports],
            "out_slots": list(self.out_slots),
        }


@dataclass
class WireSpec:
    src: tuple[str, int]
    dst: tuple[str, int]
    value: dict | None = None

    def to_json(self) -> dict:
        return {"src": list(self.src), "dst": list(self.dst), "value": self.value}


def literal_value(value) -> dict:
    return {"tag": "literal", "value": value}


def ref_value(ref_id: str) -> dict:
    return {"tag": "ref", "id": ref_id}


@dataclass
class RawDocument:
    metadata: dict = field(default_factory=dict)
    boxes: list[BoxSpec] = field(default_factory=list)
    wires: list[WireSpec] = field(default_factory=list)
    outer_in: list[PortSpec] = field(default_factory=list)
    outer_out: list[PortSpec] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "kind": "raw",
            "metadata": self.metadata,
            "outer_in": [p.to_json() for p in self.outer_in],
            "outer_out": [p.to_json() for p in self.outer_out],
            "boxes": [b.to_json() for b in self.boxes],
            "wires": [w.to_json() for w in self.wires],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"
