"""Elaboration of point-free terms into abstract wiring diagrams."""
from __future__ import annotations

from .diagram import (
    OUTER,
    AbstractType,
    Concept,
    WiringDiagram,
    Wire,
    compose_diagrams,
    identity_diagram,
    product_diagrams,
    single_box_diagram,
)
from .errors import DiagramError, ElaborationError
from .ontology import OntologyPresentation, is_subtype
from .terms import (
    Braid,
    Coerce,
    Compose,
    Copy,
    Delete,
    GeneratorRef,
    Id,
    MonoclTerm,
    MonoclType,
    Product,
    print_term,
)


def _ports(t: MonoclType, o: OntologyPresentation) -> tuple[AbstractType, ...]:
    for factor in t.factors:
        if factor not in o.types_by_id:
            raise ElaborationError(f"undeclared type {factor!r}")
    return tuple(AbstractType(f) for f in t.factors)


def elaborate(term: MonoclTerm, o: OntologyPresentation) -> WiringDiagram:
    """Build the diagram a term denotes.

    Composition accepts a componentwise subtype mismatch between codomain
    and domain: the implicit conversion is realized as a plain wire whose
    endpoint types differ, never as a box. Copy and delete lower to wire
    fan-out and fan-drop.
    """
    if isinstance(term, GeneratorRef):
        gen = o.functions_by_id.get(term.id)
        if gen is None:
            raise ElaborationError(f"unresolved generator {term.id!r}")
        return single_box_diagram(
            Concept(gen.id), _ports(gen.domain, o), _ports(gen.codomain, o)
        )
    if isinstance(term, Id):
        return identity_diagram(_ports(term.type, o))
    if isinstance(term, Braid):
        left, right = _ports(term.left, o), _ports(term.right, o)
        wires = [Wire((OUTER, i), (OUTER, len(right) + i)) for i in range(len(left))]
        wires += [Wire((OUTER, len(left) + j), (OUTER, j)) for j in range(len(right))]
        return WiringDiagram({}, left + right, right + left, tuple(wires))
    if isinstance(term, Copy):
        ports = _ports(term.type, o)
        n = len(ports)
        wires = [Wire((OUTER, k), (OUTER, k)) for k in range(n)]
        wires += [Wire((OUTER, k), (OUTER, n + k)) for k in range(n)]
        return WiringDiagram({}, ports, ports + ports, tuple(wires))
    if isinstance(term, Delete):
        return WiringDiagram({}, _ports(term.type, o), (), ())
    if isinstance(term, Coerce):
        if not is_subtype(term.source, term.target, o):
            raise ElaborationError(
                f"coercion violation: {term.source} is not a subtype of {term.target}"
            )
        src, dst = _ports(term.source, o), _ports(term.target, o)
        wires = tuple(Wire((OUTER, k), (OUTER, k)) for k in range(len(src)))
        return WiringDiagram({}, src, dst, wires)
    if isinstance(term, Compose):
        result = elaborate(term.parts[0], o)
        for part in term.parts[1:]:
            right = elaborate(part, o)
            try:
                result = compose_diagrams(result, right, o)
            except DiagramError as exc:
                raise ElaborationError(
                    f"cannot compose before {print_term(part)!r}: {exc}"
                ) from exc
        return result
    if isinstance(term, Product):
        result = elaborate(term.parts[0], o)
        for part in term.parts[1:]:
            result = product_diagrams(result, elaborate(part, o))
        return result
    raise TypeError(f"not a term: {term!r}")
