"""Deterministic DOT rendering of wiring diagrams."""
from __future__ import annotations

from .diagram import (
    OUTER,
    AbstractType,
    ConcreteType,
    WiringDiagram,
    label_text,
)
from .refs import Literal


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _type_text(port) -> str:
    if isinstance(port, ConcreteType):
        return port.ref.qualified_name
    if isinstance(port, AbstractType):
        return port.id
    return "?"


def _value_text(value) -> str:
    if isinstance(value, Literal):
        return repr(value.value)
    return value.id


def to_dot(d: WiringDiagram, include_values: bool = False) -> str:
    """Render boxes as nodes (Unknown as "?") and wires as edges labeled
    with the source port's type name; observed values are appended when
    requested. Output is byte-stable for equal diagrams."""
    names = {box_id: f"b{k}" for k, box_id in enumerate(d.boxes)}
    lines = ["digraph flowgraph {", "  rankdir=TB;", "  node [shape=box];"]
    lines.append("  subgraph outer_inputs {")
    lines.append("    rank=source;")
    for k in range(len(d.outer_in)):
        lines.append(f'    i{k} [shape=plaintext, label="in {k}"];')
    lines.append("  }")
    lines.append("  subgraph outer_outputs {")
    lines.append("    rank=sink;")
    for k in range(len(d.outer_out)):
        lines.append(f'    o{k} [shape=plaintext, label="out {k}"];')
    lines.append("  }")
    for box_id, box in d.boxes.items():
        lines.append(f'  {names[box_id]} [label="{_escape(label_text(box.label))}"];')

    def node(endpoint, side: str) -> str:
        if endpoint[0] == OUTER:
            return f"i{endpoint[1]}" if side == "src" else f"o{endpoint[1]}"
        return names[endpoint[0]]

    for w in d.wires:
        if w.src[0] == OUTER:
            port_type = d.outer_in[w.src[1]]
        else:
            port_type = d.boxes[w.src[0]].out_ports[w.src[1]]
        label = _escape(_type_text(port_type))
        if include_values and w.value is not None:
            label += "\\n" + _escape(_value_text(w.value))
        lines.append(f'  {node(w.src, "src")} -> {node(w.dst, "dst")} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
