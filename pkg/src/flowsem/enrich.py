"""Semantic enrichment: expansion of annotated boxes, contraction of
unannotated regions.

Expansion replaces every annotated concrete box by its elaborated
definition and relabels the rest Unknown; concrete port types are mapped
through the type-annotation table. Contraction then encapsulates every
maximal convex all-Unknown region into a single Unknown box. Expansion
runs first so contraction sees the final Unknown set.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .diagram import (
    OUTER,
    AbstractType,
    Box,
    Concept,
    Concrete,
    ConcreteType,
    UNKNOWN,
    UNTYPED,
    Unknown,
    UnknownType,
    WiringDiagram,
    Wire,
    substitute,
    topological_order,
)
from .elaborate import elaborate
from .errors import DiagramError, ElaborationError, EnrichmentError
from .ontology import (
    FunctionAnnotation,
    OntologyPresentation,
    is_subtype,
    resolve_function_annotation,
    resolve_type_annotation,
)
from .refs import ConcreteRef
from .report import ValidationReport
from .terms import MonoclType

MODES = ("strict", "lenient")


@dataclass(frozen=True)
class EnrichmentConfig:
    mode: str = "lenient"
    keep_values: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class EnrichmentReport:
    expanded_boxes: int = 0
    unknown_boxes_before: int = 0
    unknown_boxes_after: int = 0
    coercion_warnings: list[str] = field(default_factory=list)
    unresolved_refs: list[ConcreteRef] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "expanded_boxes": self.expanded_boxes,
            "unknown_boxes_before": self.unknown_boxes_before,
            "unknown_boxes_after": self.unknown_boxes_after,
            "coercion_warnings": list(self.coercion_warnings),
            "unresolved_refs": [str(r) for r in self.unresolved_refs],
        }


def _default_in_slots(box: Box) -> tuple[str, ...]:
    return box.in_slots or tuple(str(k) for k in range(len(box.in_ports)))


def _default_out_slots(box: Box) -> tuple[str, ...]:
    if box.out_slots:
        return box.out_slots
    if len(box.out_ports) == 1:
        return ("return",)
    return tuple(f"return.{k}" for k in range(len(box.out_ports)))


def _slot_maps(
    box_id: str, box: Box, ann: FunctionAnnotation
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    in_slots, out_slots = _default_in_slots(box), _default_out_slots(box)
    in_map, out_map = [], []
    for slot in ann.input_slots:
        if slot not in in_slots:
            raise EnrichmentError(
                f"annotation {ann.id!r} on box {box_id!r}: no input slot {slot!r}"
            )
        in_map.append(in_slots.index(slot))
    for slot in ann.output_slots:
        if slot not in out_slots:
            raise EnrichmentError(
                f"annotation {ann.id!r} on box {box_id!r}: no output slot {slot!r}"
            )
        out_map.append(out_slots.index(slot))
    return tuple(in_map), tuple(out_map)


def _port_abstract(
    port, o: OntologyPresentation, warnings: list[str], where: str
):
    """Map a concrete port type through the type-annotation table."""
    if not isinstance(port, ConcreteType):
        return port
    abstract = resolve_type_annotation(port.ref, o)
    if abstract is None:
        return UNTYPED
    if abstract.arity != 1:
        warnings.append(
            f"{where}: type annotation for {port.ref} is a product; port left untyped"
        )
        return UNTYPED
    return AbstractType(abstract.factors[0])


def expand(
    raw: WiringDiagram,
    o: OntologyPresentation,
    cfg: EnrichmentConfig = EnrichmentConfig(),
    report: EnrichmentReport | None = None,
) -> WiringDiagram:
    """Functorial expansion: substitute annotated boxes by their elaborated
    definitions (routed through the annotation's slot maps), relabel
    unannotated boxes Unknown, and abstract every remaining concrete port
    type. In strict mode a wire whose abstract endpoint types violate the
    subtype preorder aborts; in lenient mode the offending port types are
    downgraded to unknown and a coercion warning is recorded."""
    if report is None:
        report = EnrichmentReport()
    d = raw
    for box_id in list(raw.boxes):
        box = d.boxes[box_id]
        if not isinstance(box.label, Concrete):
            continue
        ann = resolve_function_annotation(box.label.ref, o)
        if ann is None:
            if all(box.label.ref.key != r.key for r in report.unresolved_refs):
                report.unresolved_refs.append(box.label.ref)
            boxes = dict(d.boxes)
            boxes[box_id] = replace(box, label=UNKNOWN)
            d = WiringDiagram(boxes, d.outer_in, d.outer_out, d.wires)
            continue
        definition = elaborate(ann.definition, o)
        in_map, out_map = _slot_maps(box_id, box, ann)
        try:
            d = substitute(d, box_id, definition, in_map, out_map)
        except DiagramError as exc:
            raise EnrichmentError(
                f"annotation {ann.id!r} does not fit box {box_id!r}: {exc}"
            ) from exc
        report.expanded_boxes += 1

    # Abstract the remaining concrete port types (Unknown boxes, boundary).
    boxes = {}
    for box_id, box in d.boxes.items():
        boxes[box_id] = replace(
            box,
            in_ports=tuple(
                _port_abstract(p, o, report.coercion_warnings, f"{box_id}:in{k}")
                for k, p in enumerate(box.in_ports)
            ),
            out_ports=tuple(
                _port_abstract(p, o, report.coercion_warnings, f"{box_id}:out{k}")
                for k, p in enumerate(box.out_ports)
            ),
        )
    outer_in = tuple(
        _port_abstract(p, o, report.coercion_warnings, f"outer_in:{k}")
        for k, p in enumerate(d.outer_in)
    )
    outer_out = tuple(
        _port_abstract(p, o, report.coercion_warnings, f"outer_out:{k}")
        for k, p in enumerate(d.outer_out)
    )
    d = WiringDiagram(boxes, outer_in, outer_out, d.wires)

    d = _enforce_wire_subtyping(d, o, cfg, report)
    if not cfg.keep_values:
        d = WiringDiagram(
            d.boxes,
            d.outer_in,
            d.outer_out,
            tuple(Wire(w.src, w.dst, None) for w in d.wires),
        )
    report.unknown_boxes_before = sum(
        isinstance(b.label, Unknown) for b in d.boxes.values()
    )
    return d


def _endpoint_type(d: WiringDiagram, endpoint, side: str):
    node, port = endpoint
    if node == OUTER:
        return (d.outer_in if side == "src" else d.outer_out)[port]
    box = d.boxes[node]
    return (box.out_ports if side == "src" else box.in_ports)[port]


def _downgradable(d: WiringDiagram, node: str) -> bool:
    return node == OUTER or not isinstance(d.boxes[node].label, Concept)


def _untype_port(d: WiringDiagram, endpoint, side: str) -> WiringDiagram:
    node, port = endpoint
    if node == OUTER:
        ports = list(d.outer_in if side == "src" else d.outer_out)
        ports[port] = UNTYPED
        if side == "src":
            return WiringDiagram(d.boxes, tuple(ports), d.outer_out, d.wires)
        return WiringDiagram(d.boxes, d.outer_in, tuple(ports), d.wires)
    box = d.boxes[node]
    if side == "src":
        ports = list(box.out_ports)
        ports[port] = UNTYPED
        box = replace(box, out_ports=tuple(ports))
    else:
        ports = list(box.in_ports)
        ports[port] = UNTYPED
        box = replace(box, in_ports=tuple(ports))
    boxes = dict(d.boxes)
    boxes[node] = box
    return WiringDiagram(boxes, d.outer_in, d.outer_out, d.wires)


def _enforce_wire_subtyping(
    d: WiringDiagram,
    o: OntologyPresentation,
    cfg: EnrichmentConfig,
    report: EnrichmentReport,
) -> WiringDiagram:
    for w in d.wires:
        s = _endpoint_type(d, w.src, "src")
        t = _endpoint_type(d, w.dst, "dst")
        if not (isinstance(s, AbstractType) and isinstance(t, AbstractType)):
            continue
        if is_subtype(MonoclType((s.id,)), MonoclType((t.id,)), o):
            continue
        message = f"wire {w.src} -> {w.dst}: {s.id} is not a subtype of {t.id}"
        if cfg.mode == "strict":
            raise EnrichmentError(message)
        report.coercion_warnings.append(message)
        if _downgradable(d, w.dst[0]):
            d = _untype_port(d, w.dst, "dst")
        elif _downgradable(d, w.src[0]):
            d = _untype_port(d, w.src, "src")
    return d


def _convex_closure(d: WiringDiagram, seeds: set[str]) -> set[str]:
    """Least box set containing the seeds and every box on a directed path
    between two of its members."""
    forward: dict[str, set[str]] = {b: set() for b in d.boxes}
    backward: dict[str, set[str]] = {b: set() for b in d.boxes}
    for w in d.wires:
        if w.src[0] != OUTER and w.dst[0] != OUTER:
            forward[w.src[0]].add(w.dst[0])
            backward[w.dst[0]].add(w.src[0])

    def reach(start: set[str], adjacency: dict[str, set[str]]) -> set[str]:
        seen = set(start)
        stack = list(start)
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    return reach(seeds, forward) & reach(seeds, backward)


def _fresh_id(d: WiringDiagram, prefix: str = "u") -> str:
    n = 1
    while f"{prefix}{n}" in d.boxes:
        n += 1
    return f"{prefix}{n}"


def _merge_region(d: WiringDiagram, region: set[str], index: dict[str, int]) -> WiringDiagram:
    entering = sorted(
        (w for w in d.wires if w.dst[0] in region and w.src[0] not in region),
        key=lambda w: (index[w.dst[0]], w.dst[1]),
    )
    leaving = [w for w in d.wires if w.src[0] in region and w.dst[0] not in region]
    out_ports_order = sorted(
        {(w.src[0], w.src[1]) for w in leaving}, key=lambda sp: (index[sp[0]], sp[1])
    )
    out_index = {sp: k for k, sp in enumerate(out_ports_order)}

    new_id = _fresh_id(d)
    merged = Box(
        UNKNOWN,
        tuple(_endpoint_type(d, w.dst, "dst") for w in entering),
        tuple(d.boxes[b].out_ports[p] for b, p in out_ports_order),
    )
    boxes = {b: bx for b, bx in d.boxes.items() if b not in region}
    boxes[new_id] = merged
    wires = [w for w in d.wires if w.src[0] not in region and w.dst[0] not in region]
    wires += [Wire(w.src, (new_id, k), w.value) for k, w in enumerate(entering)]
    wires += [Wire((new_id, out_index[(w.src[0], w.src[1])]), w.dst, w.value) for w in leaving]
    return WiringDiagram(boxes, d.outer_in, d.outer_out, tuple(wires))


def contract(d: WiringDiagram) -> WiringDiagram:
    """Encapsulate maximal convex all-Unknown regions into single boxes.

    Scans wires in a deterministic order; for a wire joining two Unknown
    boxes, the convex closure of the pair is merged when it contains no
    labeled box (merging a non-convex region would create a cycle).
    Repeats until no merge applies."""
    while True:
        index = {b: i for i, b in enumerate(topological_order(d))}
        candidates = sorted(
            (
                w
                for w in d.wires
                if w.src[0] != OUTER
                and w.dst[0] != OUTER
                and w.src[0] != w.dst[0]
                and isinstance(d.boxes[w.src[0]].label, Unknown)
                and isinstance(d.boxes[w.dst[0]].label, Unknown)
            ),
            key=lambda w: (index[w.src[0]], index[w.dst[0]], w.src[1], w.dst[1]),
        )
        merged = False
        for w in candidates:
            region = _convex_closure(d, {w.src[0], w.dst[0]})
            if all(isinstance(d.boxes[b].label, Unknown) for b in region):
                d = _merge_region(d, region, index)
                merged = True
                break
        if not merged:
            return d


def enrich(
    raw: WiringDiagram,
    o: OntologyPresentation,
    cfg: EnrichmentConfig = EnrichmentConfig(),
) -> tuple[WiringDiagram, EnrichmentReport]:
    """Expansion followed by contraction, with a populated report.

    The result is canonicalized (box ids b1..bn, sorted wires) so equal
    inputs yield byte-identical documents."""
    from .diagram import canonicalize

    report = EnrichmentReport()
    expanded = expand(raw, o, cfg, report)
    contracted = canonicalize(contract(expanded))
    report.unknown_boxes_after = sum(
        isinstance(b.label, Unknown) for b in contracted.boxes.values()
    )
    return contracted, report


def check_annotation_functoriality(
    a: FunctionAnnotation, o: OntologyPresentation
) -> ValidationReport:
    """Consistency of an annotation's two routes from concrete to abstract.

    A concrete slot class annotated as A must be compatible with the
    definition's port type P: A <= P on the domain side, P <= A on the
    codomain side. Undeclared or unannotated slot classes are reported as
    informational notes only."""
    report = ValidationReport()
    try:
        definition = elaborate(a.definition, o)
    except ElaborationError as exc:
        report.add("error", "annotation-elaboration", str(exc), a.id)
        return report
    if len(definition.outer_in) != len(a.input_slots):
        report.add(
            "error",
            "annotation-arity",
            f"definition takes {len(definition.outer_in)} inputs "
            f"but {len(a.input_slots)} input slots are mapped",
            a.id,
        )
        return report
    if len(definition.outer_out) != len(a.output_slots):
        report.add(
            "error",
            "annotation-arity",
            f"definition yields {len(definition.outer_out)} outputs "
            f"but {len(a.output_slots)} output slots are mapped",
            a.id,
        )
        return report
    if len(set(a.output_slots)) != len(a.output_slots):
        report.add("error", "annotation-arity", "duplicate output slots", a.id)

    def check_side(slots, declared, ports, side: str):
        for k, slot in enumerate(slots):
            concrete = None if declared is None else declared[k]
            if concrete is None:
                report.add(
                    "info",
                    "annotation-slot-unchecked",
                    f"{side} slot {slot!r}: concrete type undeclared",
                    a.id,
                )
                continue
            abstract = resolve_type_annotation(concrete, o)
            if abstract is None:
                report.add(
                    "info",
                    "annotation-slot-unchecked",
                    f"{side} slot {slot!r}: {concrete} has no type annotation",
                    a.id,
                )
                continue
            port_type = MonoclType((ports[k].id,))
            if side == "input":
                consistent = is_subtype(abstract, port_type, o)
                relation = f"{abstract} is not a subtype of {port_type}"
            else:
                consistent = is_subtype(port_type, abstract, o)
                relation = f"{port_type} is not a subtype of {abstract}"
            if not consistent:
                report.add(
                    "error",
                    f"annotation-{side}-type",
                    f"{side} slot {slot!r}: {relation}",
                    a.id,
                )

    check_side(a.input_slots, a.input_types, definition.outer_in, "input")
    check_side(a.output_slots, a.output_types, definition.outer_out, "output")
    return report
