"""The point-free term language: types, term trees, parser and printer.

Types are flat products of basic-type ids; the empty product is the unit
type. Terms are the usual combinators over function generators:

    term  := "compose" "(" term { "," term }+ ")"
           | "product" "(" term { "," term }+ ")"
           | "id" "[" type "]" | "copy" "[" type "]" | "delete" "[" type "]"
           | "braid" "[" type "," type "]" | "coerce" "[" type "," type "]"
           | ident
    type  := ident | "(" ")" | "(" ident { "*" ident }+ ")"
    ident := [a-z][a-z0-9-]*

``parse_term`` and ``print_term`` are exact inverses on term trees; the
printer emits one canonical spelling (single spaces after commas and
around ``*``) and never re-associates or flattens.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

KEYWORDS = ("compose", "product", "id", "braid", "copy", "delete", "coerce")


@dataclass(frozen=True)
class MonoclType:
    """A flat product of basic-type ids; empty means the unit type."""

    factors: tuple[str, ...] = ()

    @property
    def is_unit(self) -> bool:
        return not self.factors

    @property
    def arity(self) -> int:
        return len(self.factors)

    def __mul__(self, other: "MonoclType") -> "MonoclType":
        return MonoclType(self.factors + other.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "()"
        if len(self.factors) == 1:
            return self.factors[0]
        return "(" + " * ".join(self.factors) + ")"


UNIT = MonoclType()


def basic(type_id: str) -> MonoclType:
    return MonoclType((type_id,))


@dataclass(frozen=True)
class GeneratorRef:
    id: str


@dataclass(frozen=True)
class Compose:
    parts: tuple["MonoclTerm", ...]

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("compose needs at least two parts")


@dataclass(frozen=True)
class Product:
    parts: tuple["MonoclTerm", ...]

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("product needs at least two parts")


@dataclass(frozen=True)
class Id:
    type: MonoclType


@dataclass(frozen=True)
class Braid:
    left: MonoclType
    right: MonoclType


@dataclass(frozen=True)
class Copy:
    type: MonoclType


@dataclass(frozen=True)
class Delete:
    type: MonoclType


@dataclass(frozen=True)
class Coerce:
    source: MonoclType
    target: MonoclType


MonoclTerm = GeneratorRef | Compose | Product | Id | Braid | Copy | Delete | Coerce


class _Scanner:
    """Single-token lookahead over the term grammar's lexemes."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self.pos += 1

    def error(self, message: str, at: int | None = None) -> ParseError:
        offset = self.pos if at is None else at
        line = self.text.count("\n", 0, offset) + 1
        column = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return ParseError(message, offset=offset, line=line, column=column)

    def peek(self) -> str:
        self._skip_ws()
        if self.pos >= len(self.text):
            return ""
        return self.text[self.pos]

    def take(self, char: str) -> None:
        self._skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != char:
            got = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise self.error(f"expected {char!r}, found {got!r}")
        self.pos += 1

    def ident(self) -> str:
        self._skip_ws()
        start = self.pos
        if self.pos >= len(self.text) or not self.text[self.pos].islower():
            raise self.error("expected an identifier")
        while self.pos < len(self.text) and (
            self.text[self.pos].islower()
            or self.text[self.pos].isdigit()
            or self.text[self.pos] == "-"
        ):
            self.pos += 1
        return self.text[start : self.pos]

    def at_end(self) -> bool:
        self._skip_ws()
        return self.pos >= len(self.text)


def _parse_type(s: _Scanner) -> MonoclType:
    if s.peek() == "(":
        s.take("(")
        if s.peek() == ")":
            s.take(")")
            return UNIT
        factors = [s.ident()]
        while s.peek() == "*":
            s.take("*")
            factors.append(s.ident())
        s.take(")")
        return MonoclType(tuple(factors))
    return basic(s.ident())


def _parse_term(s: _Scanner) -> MonoclTerm:
    if s.peek() == "":
        raise s.error("expected a term")
    start = s.pos
    name = s.ident()
    if name == "compose" or name == "product":
        s.take("(")
        parts = [_parse_term(s)]
        while s.peek() == ",":
            s.take(",")
            parts.append(_parse_term(s))
        s.take(")")
        if len(parts) < 2:
            raise s.error(f"{name} needs at least two arguments", at=start)
        cls = Compose if name == "compose" else Product
        return cls(tuple(parts))
    if name in ("id", "copy", "delete"):
        s.take("[")
        t = _parse_type(s)
        s.take("]")
        return {"id": Id, "copy": Copy, "delete": Delete}[name](t)
    if name in ("braid", "coerce"):
        s.take("[")
        a = _parse_type(s)
        s.take(",")
        b = _parse_type(s)
        s.take("]")
        return (Braid if name == "braid" else Coerce)(a, b)
    return GeneratorRef(name)


def parse_term(text: str) -> MonoclTerm:
    """Parse the textual syntax into a term tree.

    Raises ParseError with line/column/offset on malformed input.
    """
    s = _Scanner(text)
    term = _parse_term(s)
    if not s.at_end():
        raise s.error("trailing input after term")
    return term


def print_term(term: MonoclTerm) -> str:
    """Render a term in the canonical spelling; inverse of parse_term."""
    if isinstance(term, GeneratorRef):
        return term.id
    if isinstance(term, Compose):
        return "compose(" + ", ".join(print_term(p) for p in term.parts) + ")"
    if isinstance(term, Product):
        return "product(" + ", ".join(print_term(p) for p in term.parts) + ")"
    if isinstance(term, Id):
        return f"id[{term.type}]"
    if isinstance(term, Copy):
        return f"copy[{term.type}]"
    if isinstance(term, Delete):
        return f"delete[{term.type}]"
    if isinstance(term, Braid):
        return f"braid[{term.left}, {term.right}]"
    if isinstance(term, Coerce):
        return f"coerce[{term.source}, {term.target}]"
    raise TypeError(f"not a term: {term!r}")


def iter_generator_refs(term: MonoclTerm):
    """Yield every generator id referenced in a term tree."""
    if isinstance(term, GeneratorRef):
        yield term.id
    elif isinstance(term, (Compose, Product)):
        for p in term.parts:
            yield from iter_generator_refs(p)


def iter_type_refs(term: MonoclTerm):
    """Yield every basic-type id mentioned in a term's type arguments."""
    if isinstance(term, (Id, Copy, Delete)):
        yield from term.type.factors
    elif isinstance(term, Braid):
        yield from term.left.factors
        yield from term.right.factors
    elif isinstance(term, Coerce):
        yield from term.source.factors
        yield from term.target.factors
    elif isinstance(term, (Compose, Product)):
        for p in term.parts:
            yield from iter_type_refs(p)
