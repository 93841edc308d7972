"""Acyclic box/port/wire diagrams shared by raw, abstract, and semantic graphs.

A diagram has an outer boundary (ordered input and output port lists) and
a set of labeled boxes with ordered input/output ports. Wires run from an
output-side endpoint (a box output port or an outer input port) to an
input-side endpoint (a box input port or an outer output port). Copying
and deleting are implicit: an output-side endpoint may have any number of
outgoing wires, while every input-side endpoint must have exactly one.

Diagrams are value-like: every operation builds a new diagram.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DiagramError
from .refs import ConcreteRef, ObservedValue
from .report import ValidationReport

OUTER = "@outer"


# --- labels and port types --------------------------------------------

@dataclass(frozen=True)
class Concrete:
    ref: ConcreteRef


@dataclass(frozen=True)
class Concept:
    id: str


@dataclass(frozen=True)
class Unknown:
    pass


UNKNOWN = Unknown()

BoxLabel = Concrete | Concept | Unknown


@dataclass(frozen=True)
class ConcreteType:
    ref: ConcreteRef


@dataclass(frozen=True)
class AbstractType:
    id: str


@dataclass(frozen=True)
class UnknownType:
    pass


UNTYPED = UnknownType()

PortType = ConcreteType | AbstractType | UnknownType


def label_key(label: BoxLabel) -> tuple:
    """Orderable identity of a label; port types and values excluded."""
    if isinstance(label, Concept):
        return ("concept", label.id)
    if isinstance(label, Concrete):
        r = label.ref
        return ("concrete", r.language, r.package, r.qualified_name, r.kind)
    return ("unknown",)


def label_text(label: BoxLabel) -> str:
    if isinstance(label, Concept):
        return label.id
    if isinstance(label, Concrete):
        return label.ref.qualified_name
    return "?"


# --- structure ---------------------------------------------------------

Endpoint = tuple[str, int]


@dataclass(frozen=True)
class Box:
    label: BoxLabel
    in_ports: tuple[PortType, ...]
    out_ports: tuple[PortType, ...]
    # Slot names attached by document producers (tracers, fixtures) so
    # annotations can address concrete argument/output positions by name.
    in_slots: tuple[str, ...] | None = None
    out_slots: tuple[str, ...] | None = None


@dataclass(frozen=True)
class Wire:
    src: Endpoint
    dst: Endpoint
    value: ObservedValue | None = None


@dataclass(frozen=True)
class WiringDiagram:
    boxes: dict[str, Box] = field(default_factory=dict)
    outer_in: tuple[PortType, ...] = ()
    outer_out: tuple[PortType, ...] = ()
    wires: tuple[Wire, ...] = ()


def empty_diagram() -> WiringDiagram:
    return WiringDiagram()


def identity_diagram(ports: tuple[PortType, ...]) -> WiringDiagram:
    return WiringDiagram(
        {}, ports, ports, tuple(Wire((OUTER, k), (OUTER, k)) for k in range(len(ports)))
    )


def single_box_diagram(
    label: BoxLabel,
    in_ports: tuple[PortType, ...],
    out_ports: tuple[PortType, ...],
    box_id: str = "b1",
    in_slots: tuple[str, ...] | None = None,
    out_slots: tuple[str, ...] | None = None,
) -> WiringDiagram:
    box = Box(label, tuple(in_ports), tuple(out_ports), in_slots, out_slots)
    wires = [Wire((OUTER, k), (box_id, k)) for k in range(len(in_ports))]
    wires += [Wire((box_id, k), (OUTER, k)) for k in range(len(out_ports))]
    return WiringDiagram({box_id: box}, tuple(in_ports), tuple(out_ports), tuple(wires))


# --- validation ---------------------------------------------------------

def _box_edges(d: WiringDiagram) -> dict[str, set[str]]:
    edges: dict[str, set[str]] = {b: set() for b in d.boxes}
    for w in d.wires:
        if w.src[0] != OUTER and w.dst[0] != OUTER:
            edges[w.src[0]].add(w.dst[0])
    return edges


def topological_order(d: WiringDiagram) -> list[str]:
    """Kahn's algorithm with box ids breaking ties; raises on a cycle."""
    edges = _box_edges(d)
    indegree = {b: 0 for b in d.boxes}
    for src, dsts in edges.items():
        for dst in dsts:
            indegree[dst] += 1
    ready = sorted(b for b, n in indegree.items() if n == 0)
    order = []
    while ready:
        b = ready.pop(0)
        order.append(b)
        opened = []
        for dst in edges[b]:
            indegree[dst] -= 1
            if indegree[dst] == 0:
                opened.append(dst)
        ready = sorted(ready + opened)
    if len(order) != len(d.boxes):
        raise DiagramError("diagram contains a cycle")
    return order


def validate_diagram(d: WiringDiagram, o=None) -> ValidationReport:
    """Check the well-formedness rules; with an ontology, also check that
    every wire between abstract-typed ports respects the subtype preorder."""
    from .ontology import is_subtype  # deferred: diagram is below ontology
    from .terms import MonoclType

    report = ValidationReport()

    def src_type(ep: Endpoint) -> PortType | None:
        node, port = ep
        if node == OUTER:
            if port >= len(d.outer_in) or port < 0:
                report.add("error", "bad-endpoint", f"outer input {port} out of range")
                return None
            return d.outer_in[port]
        if node not in d.boxes:
            report.add("error", "bad-endpoint", f"wire from unknown box {node!r}")
            return None
        if port >= len(d.boxes[node].out_ports) or port < 0:
            report.add("error", "bad-endpoint", f"output port {node}:{port} out of range")
            return None
        return d.boxes[node].out_ports[port]

    def dst_type(ep: Endpoint) -> PortType | None:
        node, port = ep
        if node == OUTER:
            if port >= len(d.outer_out) or port < 0:
                report.add("error", "bad-endpoint", f"outer output {port} out of range")
                return None
            return d.outer_out[port]
        if node not in d.boxes:
            report.add("error", "bad-endpoint", f"wire into unknown box {node!r}")
            return None
        if port >= len(d.boxes[node].in_ports) or port < 0:
            report.add("error", "bad-endpoint", f"input port {node}:{port} out of range")
            return None
        return d.boxes[node].in_ports[port]

    incoming: dict[Endpoint, int] = {}
    for w in d.wires:
        s, t = src_type(w.src), dst_type(w.dst)
        incoming[w.dst] = incoming.get(w.dst, 0) + 1
        if (
            o is not None
            and isinstance(s, AbstractType)
            and isinstance(t, AbstractType)
            and not is_subtype(MonoclType((s.id,)), MonoclType((t.id,)), o)
        ):
            report.add(
                "error",
                "wire-subtype",
                f"wire {w.src} -> {w.dst}: {s.id} is not a subtype of {t.id}",
            )

    for box_id, box in d.boxes.items():
        for k in range(len(box.in_ports)):
            n = incoming.get((box_id, k), 0)
            if n == 0:
                report.add("error", "missing-wire", f"input port {box_id}:{k} has no incoming wire")
            elif n > 1:
                report.add("error", "fan-in", f"input port {box_id}:{k} has {n} incoming wires")
        if box.in_slots is not None and len(box.in_slots) != len(box.in_ports):
            report.add("error", "slot-arity", f"box {box_id}: in_slots do not match in_ports")
        if box.out_slots is not None and len(box.out_slots) != len(box.out_ports):
            report.add("error", "slot-arity", f"box {box_id}: out_slots do not match out_ports")
        if o is not None and isinstance(box.label, Concept):
            gen = o.functions_by_id.get(box.label.id)
            if gen is None:
                report.add("error", "dangling-ref", f"box {box_id}: undeclared concept {box.label.id!r}")
            elif gen.domain.arity != len(box.in_ports) or gen.codomain.arity != len(box.out_ports):
                report.add(
                    "error",
                    "concept-arity",
                    f"box {box_id}: arity does not match concept {box.label.id!r}",
                )
    for k in range(len(d.outer_out)):
        n = incoming.get((OUTER, k), 0)
        if n == 0:
            report.add("error", "missing-wire", f"outer output {k} has no incoming wire")
        elif n > 1:
            report.add("error", "fan-in", f"outer output {k} has {n} incoming wires")

    try:
        topological_order(d)
    except DiagramError:
        report.add("error", "cycle", "directed cycle through boxes")
    return report


# --- composition and products -------------------------------------------

def _merge_boxes(*diagrams: WiringDiagram) -> tuple[dict[str, Box], list[dict[str, str]]]:
    """Disjoint union of box maps under fresh sequential ids b1, b2, ..."""
    merged: dict[str, Box] = {}
    renamings = []
    counter = 1
    for d in diagrams:
        renaming = {}
        for old_id, box in d.boxes.items():
            new_id = f"b{counter}"
            counter += 1
            renaming[old_id] = new_id
            merged[new_id] = box
        renamings.append(renaming)
    return merged, renamings


def compose_diagrams(d1: WiringDiagram, d2: WiringDiagram, o=None) -> WiringDiagram:
    """Splice d2 after d1; the interface ports disappear.

    With an ontology in scope, each interface pair of abstract types must
    satisfy the subtype preorder (implicit conversion along the wire).
    """
    from .ontology import is_subtype
    from .terms import MonoclType

    if len(d1.outer_out) != len(d2.outer_in):
        raise DiagramError(
            f"cannot compose: {len(d1.outer_out)} outputs vs {len(d2.outer_in)} inputs"
        )
    if o is not None:
        for k, (s, t) in enumerate(zip(d1.outer_out, d2.outer_in)):
            if isinstance(s, AbstractType) and isinstance(t, AbstractType):
                if not is_subtype(MonoclType((s.id,)), MonoclType((t.id,)), o):
                    raise DiagramError(
                        f"cannot compose at port {k}: {s.id} is not a subtype of {t.id}"
                    )

    boxes, (ren1, ren2) = _merge_boxes(d1, d2)
    wires: list[Wire] = []
    interface: dict[int, Wire] = {}
    for w in d1.wires:
        src = (ren1.get(w.src[0], w.src[0]), w.src[1])
        if w.dst[0] == OUTER:
            interface[w.dst[1]] = Wire(src, w.dst, w.value)
        else:
            wires.append(Wire(src, (ren1[w.dst[0]], w.dst[1]), w.value))
    for k in range(len(d1.outer_out)):
        if k not in interface:
            raise DiagramError(f"left diagram output {k} has no incoming wire")
    for w in d2.wires:
        dst = (ren2.get(w.dst[0], w.dst[0]), w.dst[1])
        if w.src[0] == OUTER:
            left = interface[w.src[1]]
            value = left.value if left.value is not None else w.value
            wires.append(Wire(left.src, dst, value))
        else:
            wires.append(Wire((ren2[w.src[0]], w.src[1]), dst, w.value))
    return WiringDiagram(boxes, d1.outer_in, d2.outer_out, tuple(wires))


def product_diagrams(d1: WiringDiagram, d2: WiringDiagram) -> WiringDiagram:
    """Place d1 and d2 side by side; boundaries concatenate in order."""
    boxes, (ren1, ren2) = _merge_boxes(d1, d2)
    di, do = len(d1.outer_in), len(d1.outer_out)
    wires: list[Wire] = []
    for w in d1.wires:
        src = (ren1.get(w.src[0], w.src[0]), w.src[1])
        dst = (ren1.get(w.dst[0], w.dst[0]), w.dst[1])
        wires.append(Wire(src, dst, w.value))
    for w in d2.wires:
        src = (OUTER, w.src[1] + di) if w.src[0] == OUTER else (ren2[w.src[0]], w.src[1])
        dst = (OUTER, w.dst[1] + do) if w.dst[0] == OUTER else (ren2[w.dst[0]], w.dst[1])
        wires.append(Wire(src, dst, w.value))
    return WiringDiagram(
        boxes, d1.outer_in + d2.outer_in, d1.outer_out + d2.outer_out, tuple(wires)
    )


# --- operadic substitution -----------------------------------------------

def substitute(
    host: WiringDiagram,
    box_id: str,
    replacement: WiringDiagram,
    in_map: tuple[int, ...] | None = None,
    out_map: tuple[int, ...] | None = None,
) -> WiringDiagram:
    """Replace one host box by an entire diagram, rerouting boundary wires.

    ``in_map[j]`` is the host input port feeding replacement domain port j;
    ``out_map[j]`` is the host output port realized by replacement codomain
    port j. Both default to the identity. Host input ports not referenced
    by in_map lose their wires (fan-drop); host output ports not produced
    by out_map must have no consumers. Observed values on the host's
    severed wires survive onto the rerouted wires.
    """
    if box_id not in host.boxes:
        raise DiagramError(f"no box {box_id!r} in host")
    box = host.boxes[box_id]
    if in_map is None:
        in_map = tuple(range(len(replacement.outer_in)))
    if out_map is None:
        out_map = tuple(range(len(replacement.outer_out)))
    if len(in_map) != len(replacement.outer_in):
        raise DiagramError("in_map arity does not match replacement domain")
    if len(out_map) != len(replacement.outer_out):
        raise DiagramError("out_map arity does not match replacement codomain")
    if any(k >= len(box.in_ports) or k < 0 for k in in_map):
        raise DiagramError("in_map references a missing host input port")
    if any(k >= len(box.out_ports) or k < 0 for k in out_map):
        raise DiagramError("out_map references a missing host output port")
    if len(set(out_map)) != len(out_map):
        raise DiagramError("out_map maps two replacement outputs to one host port")

    renaming = {old: f"{box_id}:{i}" for i, old in enumerate(replacement.boxes)}
    boxes = {b: bx for b, bx in host.boxes.items() if b != box_id}
    for old, new in renaming.items():
        boxes[new] = replacement.boxes[old]

    host_in: dict[int, Wire] = {}
    host_out: dict[int, list[Wire]] = {}
    wires: list[Wire] = []
    for w in host.wires:
        if w.dst[0] == box_id:
            host_in[w.dst[1]] = w
        elif w.src[0] == box_id:
            host_out.setdefault(w.src[1], []).append(w)
        else:
            wires.append(w)

    produced = {host_port: j for j, host_port in enumerate(out_map)}
    for port, outgoing in host_out.items():
        if port not in produced and outgoing:
            raise DiagramError(
                f"host output port {box_id}:{port} has consumers but no replacement output"
            )

    def pick(*values):
        for v in values:
            if v is not None:
                return v
        return None

    for w in replacement.wires:
        if w.src[0] == OUTER:
            feeder = host_in.get(in_map[w.src[1]])
            if feeder is None:
                raise DiagramError(
                    f"host input port {box_id}:{in_map[w.src[1]]} has no incoming wire"
                )
            if w.dst[0] == OUTER:
                for out_wire in host_out.get(out_map[w.dst[1]], []):
                    wires.append(
                        Wire(feeder.src, out_wire.dst, pick(feeder.value, out_wire.value, w.value))
                    )
            else:
                wires.append(
                    Wire(feeder.src, (renaming[w.dst[0]], w.dst[1]), pick(feeder.value, w.value))
                )
        elif w.dst[0] == OUTER:
            for out_wire in host_out.get(out_map[w.dst[1]], []):
                wires.append(
                    Wire(
                        (renaming[w.src[0]], w.src[1]),
                        out_wire.dst,
                        pick(out_wire.value, w.value),
                    )
                )
        else:
            wires.append(
                Wire((renaming[w.src[0]], w.src[1]), (renaming[w.dst[0]], w.dst[1]), w.value)
            )
    return WiringDiagram(boxes, host.outer_in, host.outer_out, tuple(wires))


# --- normalization and equivalence ---------------------------------------

def _dead_boxes(d: WiringDiagram) -> set[str]:
    """Boxes with no directed path to an outer output or to an Unknown box.

    Unknown boxes are exempt themselves (deleting is not assumed natural
    for them) and pin their suppliers: removing a feeder of a surviving
    box would orphan one of its input ports."""
    feeders: dict[str, set[str]] = {b: set() for b in d.boxes}
    live: set[str] = {b for b, bx in d.boxes.items() if isinstance(bx.label, Unknown)}
    for w in d.wires:
        if w.src[0] == OUTER:
            continue
        if w.dst[0] == OUTER:
            live.add(w.src[0])
        else:
            feeders[w.dst[0]].add(w.src[0])
    stack = list(live)
    while stack:
        for b in feeders[stack.pop()]:
            if b not in live:
                live.add(b)
                stack.append(b)
    return set(d.boxes) - live


def _drop_boxes(d: WiringDiagram, doomed: set[str]) -> WiringDiagram:
    return WiringDiagram(
        {b: bx for b, bx in d.boxes.items() if b not in doomed},
        d.outer_in,
        d.outer_out,
        tuple(w for w in d.wires if w.src[0] not in doomed and w.dst[0] not in doomed),
    )


def _find_share(d: WiringDiagram) -> tuple[str, str] | None:
    """First mergeable pair in topological order: non-Unknown boxes with
    the same label, arities, and pointwise-identical input wire sources.

    Port types are deliberately not compared: a shared label names one
    function, whose port types are fixed by the ontology; recorded types
    can differ only through lenient-mode downgrades, which must not leak
    into the equality decision."""
    sources: dict[str, dict[int, Endpoint]] = {b: {} for b in d.boxes}
    for w in d.wires:
        if w.dst[0] != OUTER:
            sources[w.dst[0]][w.dst[1]] = w.src
    order = topological_order(d)
    seen: dict[tuple, str] = {}
    for b in order:
        box = d.boxes[b]
        if isinstance(box.label, Unknown):
            continue
        sig = (
            label_key(box.label),
            len(box.in_ports),
            len(box.out_ports),
            tuple(sources[b].get(k) for k in range(len(box.in_ports))),
        )
        if sig in seen:
            return seen[sig], b
        seen[sig] = b
    return None


def _merge_pair(d: WiringDiagram, keep: str, drop: str) -> WiringDiagram:
    wires = []
    for w in d.wires:
        if w.dst[0] == drop:
            continue
        if w.src[0] == drop:
            wires.append(Wire((keep, w.src[1]), w.dst, w.value))
        else:
            wires.append(w)
    return WiringDiagram(
        {b: bx for b, bx in d.boxes.items() if b != drop}, d.outer_in, d.outer_out, tuple(wires)
    )


def normalize(d: WiringDiagram) -> WiringDiagram:
    """Cartesian normal form: dead-code elimination plus maximal sharing,
    iterated to a fixpoint, then canonical id assignment.

    Unknown-labeled boxes are never eliminated or merged: they are not
    assumed natural with respect to copying or deleting.
    """
    while True:
        doomed = _dead_boxes(d)
        if doomed:
            d = _drop_boxes(d, doomed)
            continue
        pair = _find_share(d)
        if pair is None:
            break
        d = _merge_pair(d, *pair)
    return canonicalize(d)


def _endpoint_key(ep: Endpoint, numbering: dict[str, int], side: str) -> tuple:
    if ep[0] == OUTER:
        return (0, side, ep[1])
    return (1, numbering[ep[0]], ep[1])


def _wl_colors(d: WiringDiagram, rounds: int = 3) -> dict[str, int]:
    """Iteratively refined structural colors, independent of box ids.

    Colors start from (label, arity) and absorb the colors of neighbors
    across ports for a few rounds; they are interned as small integers in
    a canonical (sorted) order so they can be compared and reused.
    """
    in_adj: dict[str, list[tuple[int, Endpoint]]] = {b: [] for b in d.boxes}
    out_adj: dict[str, list[tuple[int, Endpoint]]] = {b: [] for b in d.boxes}
    for w in d.wires:
        if w.dst[0] != OUTER:
            in_adj[w.dst[0]].append((w.dst[1], w.src))
        if w.src[0] != OUTER:
            out_adj[w.src[0]].append((w.src[1], w.dst))

    base_keys = {
        b: (label_key(box.label), len(box.in_ports), len(box.out_ports))
        for b, box in d.boxes.items()
    }
    intern = {key: i for i, key in enumerate(sorted(set(base_keys.values())))}
    color = {b: intern[base_keys[b]] for b in d.boxes}
    for _ in range(rounds):
        keys = {}
        for b in d.boxes:
            ins = sorted(
                ("o", src[1], port) if src[0] == OUTER else ("b", color[src[0]], port)
                for port, src in in_adj[b]
            )
            outs = sorted(
                ("o", dst[1], port) if dst[0] == OUTER else ("b", color[dst[0]], port)
                for port, dst in out_adj[b]
            )
            keys[b] = (color[b], tuple(ins), tuple(outs))
        intern = {key: i for i, key in enumerate(sorted(set(keys.values())))}
        color = {b: intern[keys[b]] for b in d.boxes}
    return color


def _canonical_order(d: WiringDiagram) -> list[str]:
    """Deterministic box order independent of box ids and wire order.

    Boxes become eligible once all suppliers are numbered; among eligible
    boxes the least (in-wire profile, label, refined color) goes first.
    Exact profile ties are broken by trying each choice and keeping the
    lexicographically least complete encoding.
    """
    in_wires: dict[str, list[tuple[int, Endpoint]]] = {b: [] for b in d.boxes}
    consumers: dict[str, list[str]] = {b: [] for b in d.boxes}
    pending: dict[str, int] = {b: 0 for b in d.boxes}
    for w in d.wires:
        if w.dst[0] != OUTER:
            in_wires[w.dst[0]].append((w.dst[1], w.src))
            if w.src[0] != OUTER:
                consumers[w.src[0]].append(w.dst[0])
                pending[w.dst[0]] += 1
    colors = _wl_colors(d)

    def profile(b: str, numbering: dict[str, int]) -> tuple:
        box = d.boxes[b]
        edges = sorted(
            (port, _endpoint_key(src, numbering, "I")) for port, src in in_wires[b]
        )
        return (
            edges,
            label_key(box.label),
            len(box.in_ports),
            len(box.out_ports),
            colors[b],
        )

    best: list[list[str]] = [[]]

    def search(order: list[str], numbering: dict[str, int], remaining: dict[str, int]):
        if len(order) == len(d.boxes):
            if not best[0] or _encode_with(d, order) < _encode_with(d, best[0]):
                best[0] = list(order)
            return
        eligible = [b for b, n in remaining.items() if n == 0 and b not in numbering]
        profiles = {b: profile(b, numbering) for b in eligible}
        least = min(profiles.values())
        tied = [b for b in eligible if profiles[b] == least]
        for b in tied:
            numbering[b] = len(order)
            order.append(b)
            for c in consumers[b]:
                remaining[c] -= 1
            search(order, numbering, remaining)
            for c in consumers[b]:
                remaining[c] += 1
            order.pop()
            del numbering[b]
            if len(tied) == 1:
                break

    search([], {}, dict(pending))
    return best[0]


def _encode_with(d: WiringDiagram, order: list[str]) -> tuple:
    numbering = {b: k for k, b in enumerate(order)}
    boxes = tuple(
        (label_key(d.boxes[b].label), len(d.boxes[b].in_ports), len(d.boxes[b].out_ports))
        for b in order
    )
    wires = tuple(
        sorted(
            (_endpoint_key(w.src, numbering, "I"), _endpoint_key(w.dst, numbering, "O"))
            for w in d.wires
        )
    )
    return (len(d.outer_in), len(d.outer_out), boxes, wires)


def canonical_encoding(d: WiringDiagram) -> tuple:
    """Structure-only fingerprint: equal iff diagrams are isomorphic as
    boundary-anchored labeled port graphs (types and values ignored)."""
    return _encode_with(d, _canonical_order(d))


def canonicalize(d: WiringDiagram) -> WiringDiagram:
    """Renumber boxes b1..bn in canonical order and sort the wire list."""
    order = _canonical_order(d)
    numbering = {b: k for k, b in enumerate(order)}
    renaming = {b: f"b{k + 1}" for k, b in enumerate(order)}

    def rename(ep: Endpoint) -> Endpoint:
        return ep if ep[0] == OUTER else (renaming[ep[0]], ep[1])

    in_order = sorted(
        d.wires,
        key=lambda w: (
            _endpoint_key(w.src, numbering, "I"),
            _endpoint_key(w.dst, numbering, "O"),
        ),
    )
    wires = tuple(Wire(rename(w.src), rename(w.dst), w.value) for w in in_order)
    return WiringDiagram(
        {renaming[b]: d.boxes[b] for b in order}, d.outer_in, d.outer_out, wires
    )


def equivalent(d1: WiringDiagram, d2: WiringDiagram, up_to_naturality: bool = True) -> bool:
    """Decide equality of the programs the diagrams denote.

    By default both sides are normalized first (free cartesian equality);
    with up_to_naturality=False the comparison is purely syntactic
    isomorphism. Box labels, arities, wire structure, and the outer
    boundary are compared pointwise; port types and observed values are
    run- and language-dependent metadata and do not affect the answer.
    """
    if up_to_naturality:
        d1, d2 = normalize(d1), normalize(d2)
    return canonical_encoding(d1) == canonical_encoding(d2)


def relabel_boxes(d: WiringDiagram, mapping: dict[str, str]) -> WiringDiagram:
    """Rename box ids (testing helper; the diagram is otherwise unchanged)."""
    def rename(ep: Endpoint) -> Endpoint:
        return ep if ep[0] == OUTER else (mapping.get(ep[0], ep[0]), ep[1])

    return WiringDiagram(
        {mapping.get(b, b): bx for b, bx in d.boxes.items()},
        d.outer_in,
        d.outer_out,
        tuple(Wire(rename(w.src), rename(w.dst), w.value) for w in d.wires),
    )
