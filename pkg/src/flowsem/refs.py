"""References to concrete code entities and observed runtime values.

These are the leaf types shared by the ontology (annotation keys) and the
flow graphs (box labels, port types, wire values).
"""
from __future__ import annotations

from dataclasses import dataclass, field

LANGUAGES = ("python", "r")
KINDS = ("function", "method", "getter", "setter", "constructor")


@dataclass(frozen=True)
class ConcreteRef:
    """A language-specific code entity: a function, method, getter, etc.

    ``resolution_list`` starts with (package, qualified_name) itself and
    continues with superclass/supertype candidates in resolution order; it
    drives annotation lookup for polymorphic call sites.
    """

    language: str
    package: str
    qualified_name: str
    kind: str = "function"
    resolution_list: tuple[tuple[str, str], ...] = field(default=())

    def __post_init__(self):
        if self.language not in LANGUAGES:
            raise ValueError(f"unknown language {self.language!r}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        head = (self.package, self.qualified_name)
        if not self.resolution_list:
            object.__setattr__(self, "resolution_list", (head,))
        elif self.resolution_list[0] != head:
            raise ValueError(
                f"resolution_list must start with {head!r}, "
                f"got {self.resolution_list[0]!r}"
            )

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.language, self.package, self.qualified_name)

    def __str__(self) -> str:
        return f"{self.language}:{self.package}.{self.qualified_name}"


# An observed element on a wire: either a small literal or an opaque,
# per-document-stable object reference.

@dataclass(frozen=True)
class Literal:
    value: int | float | str | bool | None


@dataclass(frozen=True)
class Ref:
    id: str


ObservedValue = Literal | Ref
