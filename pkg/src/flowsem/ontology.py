"""Ontology presentations: concept generators, annotations, and the
subtype/subfunction preorders.

A presentation is the finite generating data: basic types, basic
functions, subtype and subfunction generators, plus annotation tables
mapping concrete code entities onto concepts. Once loaded and validated
a presentation is immutable; preorder closures are computed once and
cached, so it is safe to share across concurrent enrichment jobs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

from .errors import OntologyError, ParseError
from .refs import ConcreteRef
from .report import ValidationReport
from .terms import (
    MonoclTerm,
    MonoclType,
    iter_generator_refs,
    iter_type_refs,
    parse_term,
    print_term,
)


@dataclass(frozen=True)
class TypeGenerator:
    id: str
    display_name: str
    description: str | None = None


@dataclass(frozen=True)
class FunctionGenerator:
    id: str
    domain: MonoclType
    codomain: MonoclType
    display_name: str


@dataclass(frozen=True)
class SubtypeGenerator:
    sub: str
    super: str


@dataclass(frozen=True)
class SubfunctionGenerator:
    sub: str
    super: str


@dataclass(frozen=True)
class TypeAnnotation:
    id: str
    concrete: ConcreteRef
    abstract: MonoclType


@dataclass(frozen=True)
class FunctionAnnotation:
    """Maps a concrete function onto an abstract program.

    ``input_slots[k]`` names the concrete argument slot feeding abstract
    domain port k ("self", a positional index as a string, or a keyword
    name); ``output_slots[k]`` names the concrete output slot realizing
    abstract codomain port k ("return", "return.<i>" for tuple elements,
    "self!" / "arg_<slot>!" for mutated objects). ``input_types`` /
    ``output_types``, when declared, give the concrete classes of those
    slots for the consistency check; entries may be None for undeclared.
    """

    id: str
    concrete: ConcreteRef
    definition: MonoclTerm
    input_slots: tuple[str, ...]
    output_slots: tuple[str, ...]
    input_types: tuple[ConcreteRef | None, ...] | None = None
    output_types: tuple[ConcreteRef | None, ...] | None = None


@dataclass(frozen=True)
class OntologyPresentation:
    types: tuple[TypeGenerator, ...] = ()
    functions: tuple[FunctionGenerator, ...] = ()
    subtypes: tuple[SubtypeGenerator, ...] = ()
    subfunctions: tuple[SubfunctionGenerator, ...] = ()
    type_annotations: tuple[TypeAnnotation, ...] = ()
    function_annotations: tuple[FunctionAnnotation, ...] = ()

    @cached_property
    def types_by_id(self) -> dict[str, TypeGenerator]:
        return {t.id: t for t in self.types}

    @cached_property
    def functions_by_id(self) -> dict[str, FunctionGenerator]:
        return {f.id: f for f in self.functions}

    @cached_property
    def subtype_closure(self) -> dict[str, frozenset[str]]:
        """Reflexive-transitive closure: type id -> all supertypes."""
        return _closure(
            [t.id for t in self.types], [(s.sub, s.super) for s in self.subtypes]
        )

    @cached_property
    def subfunction_closure(self) -> dict[str, frozenset[str]]:
        return _closure(
            [f.id for f in self.functions],
            [(s.sub, s.super) for s in self.subfunctions],
        )

    @cached_property
    def type_annotation_index(self) -> dict[tuple[str, str, str], TypeAnnotation]:
        return {a.concrete.key: a for a in self.type_annotations}

    @cached_property
    def function_annotation_index(self) -> dict[tuple[str, str, str], FunctionAnnotation]:
        return {a.concrete.key: a for a in self.function_annotations}


def _closure(nodes: list[str], edges: list[tuple[str, str]]) -> dict[str, frozenset[str]]:
    adjacency: dict[str, set[str]] = {n: set() for n in nodes}
    for sub, sup in edges:
        adjacency.setdefault(sub, set()).add(sup)
        adjacency.setdefault(sup, set())
    closure: dict[str, frozenset[str]] = {}
    for node in adjacency:
        seen = {node}
        stack = [node]
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        closure[node] = frozenset(seen)
    return closure


def is_subtype(s: MonoclType, t: MonoclType, o: OntologyPresentation) -> bool:
    """Componentwise preorder on flat products; arities must agree."""
    if s.arity != t.arity:
        return False
    closure = o.subtype_closure
    for a, b in zip(s.factors, t.factors):
        if a not in closure:
            raise OntologyError(f"undeclared type {a!r}")
        if b not in o.types_by_id:
            raise OntologyError(f"undeclared type {b!r}")
        if b not in closure[a]:
            return False
    return True


def is_subfunction(f: str, g: str, o: OntologyPresentation) -> bool:
    closure = o.subfunction_closure
    if f not in closure:
        raise OntologyError(f"undeclared function {f!r}")
    if g not in o.functions_by_id:
        raise OntologyError(f"undeclared function {g!r}")
    return g in closure[f]


def resolve_type_annotation(c: ConcreteRef, o: OntologyPresentation) -> MonoclType | None:
    """Walk the ref's resolution list; first annotated entry wins."""
    for package, qualified_name in c.resolution_list:
        hit = o.type_annotation_index.get((c.language, package, qualified_name))
        if hit is not None:
            return hit.abstract
    return None


def resolve_function_annotation(
    c: ConcreteRef, o: OntologyPresentation
) -> FunctionAnnotation | None:
    for package, qualified_name in c.resolution_list:
        hit = o.function_annotation_index.get((c.language, package, qualified_name))
        if hit is not None:
            return hit
    return None


# --- document parsing -------------------------------------------------

_TOP_KEYS = (
    "types",
    "functions",
    "subtypes",
    "subfunctions",
    "type_annotations",
    "function_annotations",
)


def _doc_error(message: str) -> ParseError:
    return ParseError(message, offset=0, line=0, column=0)


def _want(obj, key: str, where: str, default=None, required: bool = True):
    if not isinstance(obj, dict):
        raise _doc_error(f"{where}: expected an object")
    if key not in obj:
        if required:
            raise _doc_error(f"{where}: missing field {key!r}")
        return default
    return obj[key]


def _entries(data: dict, key: str):
    value = data.get(key, [])
    if not isinstance(value, list):
        raise _doc_error(f"{key} must be an array")
    for i, obj in enumerate(value):
        where = f"{key}[{i}]"
        if not isinstance(obj, dict):
            raise _doc_error(f"{where}: expected an object")
        yield i, obj


def _parse_concrete(obj, where: str) -> ConcreteRef:
    if not isinstance(obj, dict):
        raise _doc_error(f"{where}: concrete ref must be an object")
    language = _want(obj, "language", where)
    package = _want(obj, "package", where)
    qualified_name = _want(obj, "qualified_name", where)
    kind = obj.get("kind", "function")
    raw_list = obj.get("resolution_list")
    resolution = ()
    if raw_list is not None:
        resolution = tuple((p, q) for p, q in raw_list)
    try:
        return ConcreteRef(language, package, qualified_name, kind, resolution)
    except ValueError as exc:
        raise _doc_error(f"{where}: {exc}") from exc


def _parse_type_list(value, where: str, declared: set[str]) -> MonoclType:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise _doc_error(f"{where}: expected an array of type ids")
    for t in value:
        if t not in declared:
            raise _doc_error(f"{where}: dangling reference to type {t!r}")
    return MonoclType(tuple(value))


def parse_ontology_document(document: str | bytes | dict) -> OntologyPresentation:
    """Load a presentation from its JSON document form.

    Checks well-formedness, id uniqueness, and dangling references; the
    deeper semantic checks (side conditions, elaboration, consistency of
    annotations) are left to validate_presentation.
    """
    if isinstance(document, (str, bytes)):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"malformed JSON: {exc.msg}",
                offset=exc.pos,
                line=exc.lineno,
                column=exc.colno,
            ) from exc
    else:
        data = document
    if not isinstance(data, dict):
        raise _doc_error("top level must be an object")
    for key in data:
        if key not in _TOP_KEYS:
            raise _doc_error(f"unknown top-level key {key!r}")

    seen_ids: set[str] = set()

    def fresh(item_id, where: str) -> str:
        if not isinstance(item_id, str) or not item_id:
            raise _doc_error(f"{where}: id must be a nonempty string")
        if item_id in seen_ids:
            raise _doc_error(f"{where}: duplicate id {item_id!r}")
        seen_ids.add(item_id)
        return item_id

    types = []
    for i, obj in _entries(data, "types"):
        where = f"types[{i}]"
        type_id = fresh(_want(obj, "id", where), where)
        types.append(
            TypeGenerator(type_id, obj.get("display_name", type_id), obj.get("description"))
        )
    declared_types = {t.id for t in types}

    functions = []
    for i, obj in _entries(data, "functions"):
        where = f"functions[{i}]"
        fn_id = fresh(_want(obj, "id", where), where)
        functions.append(
            FunctionGenerator(
                fn_id,
                _parse_type_list(_want(obj, "domain", where), where, declared_types),
                _parse_type_list(_want(obj, "codomain", where), where, declared_types),
                obj.get("display_name", fn_id),
            )
        )
    declared_fns = {f.id for f in functions}

    subtypes = []
    for i, obj in _entries(data, "subtypes"):
        where = f"subtypes[{i}]"
        sub, sup = _want(obj, "sub", where), _want(obj, "super", where)
        for t in (sub, sup):
            if t not in declared_types:
                raise _doc_error(f"{where}: dangling reference to type {t!r}")
        if sub == sup:
            raise _doc_error(f"{where}: subtype generator relates {sub!r} to itself")
        subtypes.append(SubtypeGenerator(sub, sup))

    subfunctions = []
    for i, obj in _entries(data, "subfunctions"):
        where = f"subfunctions[{i}]"
        sub, sup = _want(obj, "sub", where), _want(obj, "super", where)
        for f in (sub, sup):
            if f not in declared_fns:
                raise _doc_error(f"{where}: dangling reference to function {f!r}")
        if sub == sup:
            raise _doc_error(f"{where}: subfunction generator relates {sub!r} to itself")
        subfunctions.append(SubfunctionGenerator(sub, sup))

    type_annotations = []
    seen_concrete: set[tuple[str, str, str]] = set()
    for i, obj in _entries(data, "type_annotations"):
        where = f"type_annotations[{i}]"
        ann_id = fresh(_want(obj, "id", where), where)
        concrete = _parse_concrete(_want(obj, "concrete", where), where)
        if concrete.key in seen_concrete:
            raise _doc_error(f"{where}: duplicate annotation for {concrete}")
        seen_concrete.add(concrete.key)
        abstract = _parse_type_list(_want(obj, "abstract", where), where, declared_types)
        type_annotations.append(TypeAnnotation(ann_id, concrete, abstract))

    function_annotations = []
    seen_concrete = set()
    for i, obj in _entries(data, "function_annotations"):
        where = f"function_annotations[{i}]"
        ann_id = fresh(_want(obj, "id", where), where)
        concrete = _parse_concrete(_want(obj, "concrete", where), where)
        if concrete.key in seen_concrete:
            raise _doc_error(f"{where}: duplicate annotation for {concrete}")
        seen_concrete.add(concrete.key)
        definition = parse_term(_want(obj, "definition", where))
        for ref in iter_generator_refs(definition):
            if ref not in declared_fns:
                raise _doc_error(f"{where}: dangling reference to function {ref!r}")
        for ref in iter_type_refs(definition):
            if ref not in declared_types:
                raise _doc_error(f"{where}: dangling reference to type {ref!r}")
        input_slots = tuple(_want(obj, "input_slots", where))
        output_slots = tuple(_want(obj, "output_slots", where))

        def slot_types(key: str, count: int):
            raw = obj.get(key)
            if raw is None:
                return None
            if len(raw) != count:
                raise _doc_error(f"{where}: {key} must have {count} entries")
            return tuple(
                None if entry is None else _parse_concrete(entry, f"{where}.{key}")
                for entry in raw
            )

        function_annotations.append(
            FunctionAnnotation(
                ann_id,
                concrete,
                definition,
                input_slots,
                output_slots,
                slot_types("input_types", len(input_slots)),
                slot_types("output_types", len(output_slots)),
            )
        )

    return OntologyPresentation(
        tuple(types),
        tuple(functions),
        tuple(subtypes),
        tuple(subfunctions),
        tuple(type_annotations),
        tuple(function_annotations),
    )


def _concrete_to_json(ref: ConcreteRef) -> dict:
    return {
        "language": ref.language,
        "package": ref.package,
        "qualified_name": ref.qualified_name,
        "kind": ref.kind,
        "resolution_list": [list(pair) for pair in ref.resolution_list],
    }


def serialize_ontology(o: OntologyPresentation) -> str:
    """Canonical JSON form; parse_ontology_document inverts it."""
    data: dict = {key: [] for key in _TOP_KEYS}
    for t in o.types:
        obj = {"id": t.id, "display_name": t.display_name}
        if t.description is not None:
            obj["description"] = t.description
        data["types"].append(obj)
    for f in o.functions:
        data["functions"].append(
            {
                "id": f.id,
                "domain": list(f.domain.factors),
                "codomain": list(f.codomain.factors),
                "display_name": f.display_name,
            }
        )
    for s in o.subtypes:
        data["subtypes"].append({"sub": s.sub, "super": s.super})
    for s in o.subfunctions:
        data["subfunctions"].append({"sub": s.sub, "super": s.super})
    for a in o.type_annotations:
        data["type_annotations"].append(
            {
                "id": a.id,
                "concrete": _concrete_to_json(a.concrete),
                "abstract": list(a.abstract.factors),
            }
        )
    for a in o.function_annotations:
        obj = {
            "id": a.id,
            "concrete": _concrete_to_json(a.concrete),
            "definition": print_term(a.definition),
            "input_slots": list(a.input_slots),
            "output_slots": list(a.output_slots),
        }
        if a.input_types is not None:
            obj["input_types"] = [
                None if t is None else _concrete_to_json(t) for t in a.input_types
            ]
        if a.output_types is not None:
            obj["output_types"] = [
                None if t is None else _concrete_to_json(t) for t in a.output_types
            ]
        data["function_annotations"].append(obj)
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _cycle_classes(o: OntologyPresentation) -> list[tuple[str, ...]]:
    closure = o.subtype_closure
    classes = []
    seen: set[str] = set()
    for a in closure:
        if a in seen:
            continue
        cls = sorted(b for b in closure[a] if a in closure.get(b, frozenset()))
        if len(cls) > 1:
            classes.append(tuple(cls))
            seen.update(cls)
    return classes


def validate_presentation(o: OntologyPresentation) -> ValidationReport:
    """Check every presentation invariant and return a severity-graded report.

    Subtype cycles are warnings (a preorder admits equivalent types);
    dangling references, subfunction side-condition violations, and
    annotation arity/consistency failures are errors.
    """
    from .enrich import check_annotation_functoriality  # deferred: avoids cycle

    report = ValidationReport()
    declared_types = o.types_by_id
    declared_fns = o.functions_by_id

    ids: set[str] = set()
    for kind, items in (("type", o.types), ("function", o.functions)):
        for item in items:
            if not item.id:
                report.add("error", "empty-id", f"{kind} generator with empty id")
            elif item.id in ids:
                report.add("error", "duplicate-id", f"duplicate id {item.id!r}")
            ids.add(item.id)

    for f in o.functions:
        for t in f.domain.factors + f.codomain.factors:
            if t not in declared_types:
                report.add("error", "dangling-ref", f"undeclared type {t!r}", f.id)

    for s in o.subtypes:
        for t in (s.sub, s.super):
            if t not in declared_types:
                report.add("error", "dangling-ref", f"undeclared type {t!r}", f"{s.sub}<={s.super}")

    for cls in _cycle_classes(o):
        report.add(
            "warning",
            "subtype-cycle",
            "mutually equivalent types: " + ", ".join(cls),
        )

    for s in o.subfunctions:
        where = f"{s.sub}<={s.super}"
        if s.sub not in declared_fns or s.super not in declared_fns:
            report.add("error", "dangling-ref", "undeclared function", where)
            continue
        sub, sup = declared_fns[s.sub], declared_fns[s.super]
        if not is_subtype(sub.domain, sup.domain, o):
            report.add(
                "error",
                "subfunction-side-condition",
                f"domain {sub.domain} is not a subtype of {sup.domain}",
                where,
            )
        if not is_subtype(sub.codomain, sup.codomain, o):
            report.add(
                "error",
                "subfunction-side-condition",
                f"codomain {sub.codomain} is not a subtype of {sup.codomain}",
                where,
            )

    for ann in o.type_annotations:
        for t in ann.abstract.factors:
            if t not in declared_types:
                report.add("error", "dangling-ref", f"undeclared type {t!r}", ann.id)

    for ann in o.function_annotations:
        report.extend(check_annotation_functoriality(ann, o))

    return report
