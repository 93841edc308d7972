"""Exception taxonomy for the toolchain.

The CLI maps these onto exit codes: parse/schema/usage problems exit 2,
domain failures (type errors, validation errors, non-equivalence) exit 1.
"""
from __future__ import annotations


class FlowsemError(Exception):
    """Base class for all toolchain errors."""


class ParseError(FlowsemError):
    """Syntax error in a term or document, annotated with a position."""

    def __init__(self, message: str, *, offset: int, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column}, offset {offset})")
        self.offset = offset
        self.line = line
        self.column = column


class OntologyError(FlowsemError):
    """Reference to an undeclared generator, duplicate id, etc."""


class ElaborationError(FlowsemError):
    """A term does not elaborate: unresolved generator or type mismatch."""


class DiagramError(FlowsemError):
    """Illegal diagram operation: arity mismatch, subtype violation."""


class EnrichmentError(FlowsemError):
    """Enrichment failure: strict-mode coercion violation, broken slot map."""


class SchemaError(FlowsemError):
    """A flow-graph document violates the serialization schema."""
