"""Serialized document format shared by raw and semantic flow graphs.

One JSON schema serves both kinds, discriminated by a ``kind`` field:
raw documents carry only concrete box labels, semantic documents only
concept or unknown labels. Reading validates the embedded diagram;
writing is canonical, so read and write are mutually inverse and a
canonically written file round-trips byte for byte.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .diagram import (
    OUTER,
    AbstractType,
    Box,
    BoxLabel,
    Concept,
    Concrete,
    ConcreteType,
    PortType,
    UNKNOWN,
    UNTYPED,
    Unknown,
    WiringDiagram,
    Wire,
    validate_diagram,
)
from .errors import ParseError, SchemaError
from .refs import ConcreteRef, Literal, ObservedValue, Ref

VERSION = 1
KINDS = ("raw", "semantic")


@dataclass(frozen=True)
class FlowGraphDocument:
    kind: str
    diagram: WiringDiagram
    metadata: dict = field(default_factory=dict)
    version: int = VERSION


def _label_to_json(label: BoxLabel) -> dict:
    if isinstance(label, Concrete):
        r = label.ref
        return {
            "tag": "concrete",
            "language": r.language,
            "package": r.package,
            "qualified_name": r.qualified_name,
            "kind": r.kind,
            "resolution_list": [list(p) for p in r.resolution_list],
        }
    if isinstance(label, Concept):
        return {"tag": "concept", "id": label.id}
    return {"tag": "unknown"}


def _label_from_json(obj, where: str) -> BoxLabel:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: label must be an object")
    tag = obj.get("tag")
    if tag == "concrete":
        try:
            return Concrete(
                ConcreteRef(
                    obj["language"],
                    obj["package"],
                    obj["qualified_name"],
                    obj.get("kind", "function"),
                    tuple((p, q) for p, q in obj.get("resolution_list", [])),
                )
            )
        except (KeyError, ValueError) as exc:
            raise SchemaError(f"{where}: bad concrete label: {exc}") from exc
    if tag == "concept":
        if "id" not in obj:
            raise SchemaError(f"{where}: concept label needs an id")
        return Concept(obj["id"])
    if tag == "unknown":
        return UNKNOWN
    raise SchemaError(f"{where}: unknown label tag {tag!r}")


def _port_to_json(port: PortType) -> dict:
    if isinstance(port, ConcreteType):
        r = port.ref
        return {
            "tag": "concrete",
            "language": r.language,
            "package": r.package,
            "qualified_name": r.qualified_name,
        }
    if isinstance(port, AbstractType):
        return {"tag": "abstract", "id": port.id}
    return {"tag": "unknown"}


def _port_from_json(obj, where: str) -> PortType:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: port type must be an object")
    tag = obj.get("tag")
    if tag == "concrete":
        try:
            return ConcreteType(
                ConcreteRef(obj["language"], obj["package"], obj["qualified_name"])
            )
        except (KeyError, ValueError) as exc:
            raise SchemaError(f"{where}: bad concrete type: {exc}") from exc
    if tag == "abstract":
        if "id" not in obj:
            raise SchemaError(f"{where}: abstract type needs an id")
        return AbstractType(obj["id"])
    if tag == "unknown":
        return UNTYPED
    raise SchemaError(f"{where}: unknown port type tag {tag!r}")


def _value_to_json(value: ObservedValue | None):
    if value is None:
        return None
    if isinstance(value, Literal):
        return {"tag": "literal", "value": value.value}
    return {"tag": "ref", "id": value.id}


def _value_from_json(obj, where: str) -> ObservedValue | None:
    if obj is None:
        return None
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: value must be an object or null")
    tag = obj.get("tag")
    if tag == "literal":
        v = obj.get("value")
        if v is not None and not isinstance(v, (int, float, str, bool)):
            raise SchemaError(f"{where}: literal must be scalar, text, boolean, or null")
        return Literal(v)
    if tag == "ref":
        if not isinstance(obj.get("id"), str):
            raise SchemaError(f"{where}: ref needs a string id")
        return Ref(obj["id"])
    raise SchemaError(f"{where}: unknown value tag {tag!r}")


def _check_kind(kind: str, diagram: WiringDiagram) -> None:
    for box_id, box in diagram.boxes.items():
        if kind == "raw" and not isinstance(box.label, Concrete):
            raise SchemaError(f"raw document has non-concrete label on box {box_id!r}")
        if kind == "semantic" and not isinstance(box.label, (Concept, Unknown)):
            raise SchemaError(f"semantic document has concrete label on box {box_id!r}")


def read_flowgraph(document: str | bytes | dict) -> FlowGraphDocument:
    """Parse and validate a flow-graph document."""
    if isinstance(document, (str, bytes)):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"malformed JSON: {exc.msg}", offset=exc.pos, line=exc.lineno, column=exc.colno
            ) from exc
    else:
        data = document
    if not isinstance(data, dict):
        raise SchemaError("top level must be an object")
    version = data.get("version")
    if version != VERSION:
        raise SchemaError(f"unsupported version {version!r} (expected {VERSION})")
    kind = data.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}")
    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict):
        raise SchemaError("metadata must be an object")

    def entries(key: str):
        value = data.get(key, [])
        if not isinstance(value, list):
            raise SchemaError(f"{key} must be an array")
        for i, obj in enumerate(value):
            if not isinstance(obj, dict):
                raise SchemaError(f"{key}[{i}]: expected an object")
            yield i, obj

    boxes: dict[str, Box] = {}
    for i, obj in entries("boxes"):
        where = f"boxes[{i}]"
        box_id = obj.get("id")
        if not isinstance(box_id, str) or not box_id or box_id == OUTER:
            raise SchemaError(f"{where}: bad box id {box_id!r}")
        if box_id in boxes:
            raise SchemaError(f"{where}: duplicate box id {box_id!r}")
        in_ports = tuple(
            _port_from_json(p, f"{where}.in_ports[{k}]")
            for k, p in enumerate(obj.get("in_ports", []))
        )
        out_ports = tuple(
            _port_from_json(p, f"{where}.out_ports[{k}]")
            for k, p in enumerate(obj.get("out_ports", []))
        )
        in_slots = tuple(obj["in_slots"]) if "in_slots" in obj else None
        out_slots = tuple(obj["out_slots"]) if "out_slots" in obj else None
        boxes[box_id] = Box(
            _label_from_json(obj.get("label", {}), where),
            in_ports,
            out_ports,
            in_slots,
            out_slots,
        )

    def endpoint(pair, where: str):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(f"{where}: endpoint must be [node, port]")
        node, port = pair
        if not isinstance(node, str) or not isinstance(port, int):
            raise SchemaError(f"{where}: endpoint must be [string, integer]")
        return (node, port)

    wires = tuple(
        Wire(
            endpoint(obj.get("src"), f"wires[{i}].src"),
            endpoint(obj.get("dst"), f"wires[{i}].dst"),
            _value_from_json(obj.get("value"), f"wires[{i}].value"),
        )
        for i, obj in entries("wires")
    )
    outer_in = tuple(
        _port_from_json(p, f"outer_in[{k}]") for k, p in enumerate(data.get("outer_in", []))
    )
    outer_out = tuple(
        _port_from_json(p, f"outer_out[{k}]") for k, p in enumerate(data.get("outer_out", []))
    )
    diagram = WiringDiagram(boxes, outer_in, outer_out, wires)
    _check_kind(kind, diagram)
    issues = validate_diagram(diagram)
    if not issues.ok:
        raise SchemaError(
            "document diagram is not well-formed: "
            + "; ".join(i.message for i in issues.errors)
        )
    return FlowGraphDocument(kind, diagram, metadata)


def write_flowgraph(doc: FlowGraphDocument) -> str:
    """Canonical serialization; deterministic for equal documents."""
    _check_kind(doc.kind, doc.diagram)
    d = doc.diagram
    boxes = []
    for box_id, box in d.boxes.items():
        obj: dict = {
            "id": box_id,
            "label": _label_to_json(box.label),
            "in_ports": [_port_to_json(p) for p in box.in_ports],
            "out_ports": [_port_to_json(p) for p in box.out_ports],
        }
        if box.in_slots is not None:
            obj["in_slots"] = list(box.in_slots)
        if box.out_slots is not None:
            obj["out_slots"] = list(box.out_slots)
        boxes.append(obj)
    data = {
        "version": doc.version,
        "kind": doc.kind,
        "metadata": doc.metadata,
        "outer_in": [_port_to_json(p) for p in d.outer_in],
        "outer_out": [_port_to_json(p) for p in d.outer_out],
        "boxes": boxes,
        "wires": [
            {
                "src": list(w.src),
                "dst": list(w.dst),
                "value": _value_to_json(w.value),
            }
            for w in d.wires
        ],
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
